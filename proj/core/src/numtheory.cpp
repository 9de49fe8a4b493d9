#include "rqmc/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rqmc {

namespace {

// Primes up to `limit` by a plain sieve; used for the base primes of the
// segmented sieve below.
std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace

PrimeRange primes_in_half_open_range(std::uint64_t M) {
  if (M < 2) {
    throw std::invalid_argument("prime pool requires M >= 2");
  }
  PrimeRange range;
  range.M = M;
  const std::uint64_t lo = (M + 1) / 2 + 1;  // ceil(M/2) excluded
  if (lo > M) return range;

  // Segmented sieve over [lo, M].
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(M))) + 1;
  const auto base = small_primes(root);
  std::vector<bool> composite(M - lo + 1, false);
  for (std::uint64_t p : base) {
    std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    for (std::uint64_t j = start; j <= M; j += p) composite[j - lo] = true;
  }
  for (std::uint64_t n = lo; n <= M; ++n) {
    if (n >= 2 && !composite[n - lo]) range.primes.push_back(n);
  }
  return range;
}

namespace {

// B_{2j} / (2j)! for the Euler-Maclaurin correction terms.
constexpr double kBernoulliOverFactorial[] = {
    1.0 / 12,                      // B2/2!
    -1.0 / 720,                    // B4/4!
    1.0 / 30240,                   // B6/6!
    -1.0 / 1209600,                // B8/8!
    1.0 / 47900160,                // B10/10!
    -691.0 / 1307674368000.0,      // B12/12!
    1.0 / 74724249600.0,           // B14/14!
    -3617.0 / 10670622842880000.0  // B16/16!
};

}  // namespace

double riemann_zeta(double x) {
  constexpr double kDomainEps = 1e-9;
  if (!(x > 1.0 + kDomainEps)) {
    throw std::domain_error("riemann_zeta requires x > 1 + 1e-9");
  }
  // Direct sum to K plus Euler-Maclaurin tail; K = 24 keeps the correction
  // series far below 1e-14 relative over the whole domain of interest.
  constexpr int K = 24;
  double sum = 0.0;
  for (int k = K - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -x);
  const double Kx = std::pow(static_cast<double>(K), -x);
  sum += 0.5 * Kx;
  sum += Kx * K / (x - 1.0);
  // sum_j B_{2j}/(2j)! * x (x+1) ... (x+2j-2) * K^{-x-2j+1}
  double rising = x;         // x (x+1) ... (x+2j-2)
  double power = Kx / K;     // K^{-x-2j+1}
  for (std::size_t j = 0; j < std::size(kBernoulliOverFactorial); ++j) {
    if (j > 0) {
      rising *= (x + 2.0 * j - 1.0) * (x + 2.0 * j);
      power /= static_cast<double>(K) * K;
    }
    sum += kBernoulliOverFactorial[j] * rising * power;
  }
  return sum;
}

double bernoulli_value(int two_alpha, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("bernoulli_value requires x in [0,1]");
  }
  const double x2 = x * x;
  switch (two_alpha) {
    case 2:
      return x2 - x + 1.0 / 6.0;
    case 4:
      return x2 * x2 - 2.0 * x2 * x + x2 - 1.0 / 30.0;
    case 6:
      return ((((x - 3.0) * x + 2.5) * x2 - 0.5) * x2) + 1.0 / 42.0;
    case 8: {
      // x^8 - 4x^7 + 14/3 x^6 - 7/3 x^4 + 2/3 x^2 - 1/30
      const double x4 = x2 * x2;
      return x4 * x4 - 4.0 * x4 * x2 * x + (14.0 / 3.0) * x4 * x2 - (7.0 / 3.0) * x4 +
             (2.0 / 3.0) * x2 - 1.0 / 30.0;
    }
    default:
      throw std::invalid_argument("bernoulli_value supports degrees 2, 4, 6, 8");
  }
}

namespace {

// (-1)^{alpha+1} (2 pi)^{2 alpha} / (2 alpha)! for alpha = 1..4.
double bernoulli_series_factor(int alpha) {
  const double two_pi = 2.0 * std::numbers::pi;
  double f = 1.0;
  for (int i = 0; i < 2 * alpha; ++i) f *= two_pi / (i + 1);
  return (alpha % 2 == 1) ? f : -f;
}

// Truncated cosine series 2 sum_{k=1}^{K} cos(2 pi k t) / k^{2 alpha} with
// K chosen from the sharper of the integral-test and Abel-summation tail
// bounds so the truncation error stays below `tol`.
double kernel_weight_series(double two_alpha, double t, double tol) {
  const double pi = std::numbers::pi;
  const double sin_pi_t = std::sin(pi * std::min(t, 1.0 - t));
  // Integral test: 2 K^{1-2a} / (2a - 1) <= tol.
  double k_integral = std::pow(2.0 / (tol * (two_alpha - 1.0)), 1.0 / (two_alpha - 1.0));
  // Abel summation with bounded cosine partial sums: ~2 K^{-2a}/sin(pi t) <= tol.
  double k_abel = std::pow(2.0 / (tol * sin_pi_t), 1.0 / two_alpha);
  double k_req = std::min(k_integral, k_abel);
  const std::uint64_t K = std::min<std::uint64_t>(
      static_cast<std::uint64_t>(std::max(64.0, std::ceil(k_req))) + 1, 50'000'000ULL);

  // cos(2 pi k t) by the three-term recurrence, resynchronised with a true
  // cosine every 4096 terms to stop drift.
  const double theta = 2.0 * pi * t;
  const double two_cos = 2.0 * std::cos(theta);
  double c_prev = 1.0;               // cos(0)
  double c_curr = std::cos(theta);   // cos(theta)
  double sum = 0.0, comp = 0.0;      // Neumaier compensation
  for (std::uint64_t k = 1; k <= K; ++k) {
    const double term = c_curr * std::pow(static_cast<double>(k), -two_alpha);
    const double tmp = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - tmp) + term;
    } else {
      comp += (term - tmp) + sum;
    }
    sum = tmp;
    const double c_next = two_cos * c_curr - c_prev;
    c_prev = c_curr;
    c_curr = c_next;
    if ((k & 4095u) == 0u) {
      c_prev = std::cos(theta * static_cast<double>(k));
      c_curr = std::cos(theta * static_cast<double>(k + 1));
    }
  }
  return 2.0 * (sum + comp);
}

}  // namespace

double korobov_kernel_weight(double alpha, double t) {
  if (!(alpha > 0.5)) {
    throw std::domain_error("korobov_kernel_weight requires alpha > 1/2");
  }
  if (!(t >= 0.0 && t < 1.0)) {
    throw std::domain_error("korobov_kernel_weight requires t in [0,1)");
  }
  const double rounded = std::round(alpha);
  const bool integral = std::abs(alpha - rounded) < 1e-12 && rounded >= 1.0 && rounded <= 4.0;
  if (integral) {
    const int a = static_cast<int>(rounded);
    return bernoulli_series_factor(a) * bernoulli_value(2 * a, t);
  }
  if (t == 0.0) {
    return 2.0 * riemann_zeta(2.0 * alpha);
  }
  return kernel_weight_series(2.0 * alpha, t, 1e-10);
}

}  // namespace rqmc
