#include "rqmc/walsh.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rqmc {

namespace {

struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > std::uint64_t(-1) / b) throw std::overflow_error("power exceeds 64 bits");
    v *= b;
  }
  return v;
}

}  // namespace

std::uint64_t PolyLatticeRule::n_points() const { return ipow(b, m); }

void PolyLatticeRule::validate() const {
  if (m < 1) throw std::invalid_argument("polynomial lattice rule requires m >= 1");
  if (p.base() != b) throw std::invalid_argument("modulus base mismatch");
  if (p.degree() != m) throw std::invalid_argument("modulus degree must equal m");
  if (q.empty()) throw std::invalid_argument("polynomial lattice rule requires s >= 1");
  for (const GFPoly& qj : q) {
    if (qj.base() != b) throw std::invalid_argument("generating vector base mismatch");
    if (qj.is_zero() || qj.degree() >= m) {
      throw std::invalid_argument("generating vector entries must be nonzero of degree < m");
    }
  }
}

int mu(std::uint64_t k, std::uint32_t b) {
  if (b < 2) throw std::invalid_argument("base must be at least 2");
  int a = 0;
  while (k != 0) {
    ++a;
    k /= b;
  }
  return a;
}

double r_tilde(const SpaceParams& params, std::uint32_t b, std::span<const std::uint64_t> k) {
  if (static_cast<int>(k.size()) != params.s) {
    throw std::invalid_argument("frequency vector dimension mismatch");
  }
  double r = 1.0;
  for (int j = 0; j < params.s; ++j) {
    const std::uint64_t kj = k[static_cast<std::size_t>(j)];
    if (kj == 0) continue;
    const double gamma = params.gamma(j + 1);
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    r *= std::pow(static_cast<double>(b), params.alpha * mu(kj, b)) / gamma;
  }
  return r;
}

std::complex<double> walsh_eval(std::uint64_t k, std::span<const std::uint8_t> digits,
                                std::uint32_t b) {
  // Exponent kappa_0 xi_1 + kappa_1 xi_2 + ... accumulated mod b; complex
  // arithmetic only at the boundary.
  std::uint64_t exponent = 0;
  std::size_t i = 0;
  std::uint64_t kk = k;
  while (kk != 0) {
    if (i >= digits.size()) {
      throw std::invalid_argument("walsh_eval needs mu(k) digits of the point");
    }
    const std::uint32_t kappa = static_cast<std::uint32_t>(kk % b);
    exponent = (exponent + static_cast<std::uint64_t>(kappa) * digits[i]) % b;
    kk /= b;
    ++i;
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent) / b;
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::uint8_t> base_digits_of_real(double x, std::uint32_t b, std::size_t count) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw std::domain_error("digit expansion requires x in [0,1)");
  }
  constexpr double kBoundaryEps = 1e-9;
  std::vector<std::uint8_t> digits(count);
  double frac = x;
  for (std::size_t i = 0; i < count; ++i) {
    frac *= b;
    double digit = std::floor(frac);
    frac -= digit;
    // A fractional part this close to 1 means the true digit is ambiguous
    // at double precision (e.g. 0.2999... vs 0.3).
    if (frac > 1.0 - kBoundaryEps) {
      throw std::domain_error("digit expansion ambiguous near a base-b boundary");
    }
    digits[i] = static_cast<std::uint8_t>(digit);
  }
  return digits;
}

std::complex<double> walsh_eval_real(std::uint64_t k, double x, std::uint32_t b) {
  const std::size_t need = static_cast<std::size_t>(mu(k, b));
  const auto digits = base_digits_of_real(x, b, need);
  return walsh_eval(k, digits, b);
}

double sigma_weight(double alpha, std::uint32_t b, int first_nonzero_index) {
  if (!(alpha > 0.5)) throw std::domain_error("sigma_weight requires alpha > 1/2");
  if (first_nonzero_index < 0) {
    throw std::invalid_argument("first nonzero digit index must be >= 0");
  }
  const double bb = static_cast<double>(b);
  const double b2a = std::pow(bb, 2.0 * alpha);
  const double head = (bb - 1.0) / (b2a - bb);
  if (first_nonzero_index == 0) return head;  // the point x = 0
  const double r = static_cast<double>(first_nonzero_index);
  return head - (b2a - 1.0) / (std::pow(bb, (2.0 * alpha - 1.0) * r) * (b2a - bb));
}

namespace detail {

std::uint64_t enc_add(std::uint64_t a, std::uint64_t c, std::uint32_t b) {
  if (b == 2) return a ^ c;
  std::uint64_t out = 0, place = 1;
  while (a != 0 || c != 0) {
    out += place * ((a % b + c % b) % b);
    a /= b;
    c /= b;
    place *= b;
  }
  return out;
}

std::uint64_t enc_neg(std::uint64_t a, std::uint32_t b) {
  if (b == 2) return a;
  std::uint64_t out = 0, place = 1;
  while (a != 0) {
    const std::uint64_t d = a % b;
    out += place * (d == 0 ? 0 : b - d);
    a /= b;
    place *= b;
  }
  return out;
}

std::vector<double> sigma_table_by_residue(double alpha, std::uint32_t b, int m) {
  const std::uint64_t bn = ipow(b, m);
  std::vector<double> table(bn);
  table[0] = sigma_weight(alpha, b, 0);
  // Residue v of degree d starts its expansion at digit index m - d.
  std::vector<double> by_index(static_cast<std::size_t>(m) + 1);
  for (int r = 1; r <= m; ++r) by_index[static_cast<std::size_t>(r)] = sigma_weight(alpha, b, r);
  int deg = 0;
  std::uint64_t next_degree_at = b;  // smallest encoding of degree deg+1
  for (std::uint64_t e = 1; e < bn; ++e) {
    if (e >= next_degree_at) {
      ++deg;
      next_degree_at *= b;
    }
    table[e] = by_index[static_cast<std::size_t>(m - deg)];
  }
  return table;
}

}  // namespace detail

namespace {

// Per-point sigma factors for one coordinate: factors[n] = 1 + gamma^2 *
// sigma(x_{n,j}) where x_{n,j} has residue n(x) q_j(x) mod p(x). Residues
// are accumulated digit-incrementally from tables of x^t q_j mod p.
void multiply_sigma_factors(std::vector<double>& prod, const GFPoly& qj, const GFPoly& p,
                            double gamma_sq, const std::vector<double>& sigma_tab,
                            std::uint32_t b, int m) {
  const std::uint64_t bn = ipow(b, m);
  std::vector<std::uint64_t> shift(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    shift[static_cast<std::size_t>(t)] =
        poly_mod_mul(GFPoly::monomial(b, t), qj, p).encoding();
  }
  prod[0] *= 1.0 + gamma_sq * sigma_tab[0];
  if (b == 2) {
    // Gray-code walk: one XOR per point.
    std::uint64_t res = 0;
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < bn; ++i) {
      const int bit = std::countr_zero(i);
      res ^= shift[static_cast<std::size_t>(bit)];
      gray ^= (1ULL << bit);
      prod[gray] *= 1.0 + gamma_sq * sigma_tab[res];
    }
    return;
  }
  // General base: residue from the lowest nonzero digit of n.
  std::vector<std::uint64_t> res(bn, 0);
  std::vector<std::uint64_t> scaled(static_cast<std::size_t>(m));
  for (std::uint64_t n = 1; n < bn; ++n) {
    // n = d * b^t + rest with d the lowest nonzero digit
    std::uint64_t tmp = n, place = 1;
    int t = 0;
    while (tmp % b == 0) {
      tmp /= b;
      place *= b;
      ++t;
    }
    const std::uint64_t d = tmp % b;
    const std::uint64_t rest = n - d * place;
    std::uint64_t step = shift[static_cast<std::size_t>(t)];
    std::uint64_t acc = 0;
    for (std::uint64_t i = 0; i < d; ++i) acc = detail::enc_add(acc, step, b);
    res[n] = detail::enc_add(res[rest], acc, b);
    prod[n] *= 1.0 + gamma_sq * sigma_tab[res[n]];
  }
}

}  // namespace

double criterion_walsh_kernel(const SpaceParams& params, const PolyLatticeRule& rule) {
  params.validate();
  rule.validate();
  if (params.s != rule.s()) {
    throw std::invalid_argument("rule dimension does not match space dimension");
  }
  if (rule.p == GFPoly::x(rule.b)) {
    throw std::invalid_argument("criterion requires modulus p != x");
  }
  if (!is_irreducible(rule.p)) {
    throw std::invalid_argument("criterion requires an irreducible modulus");
  }
  const std::uint64_t bn = rule.n_points();
  const auto sigma_tab = detail::sigma_table_by_residue(params.alpha, rule.b, rule.m);
  std::vector<double> prod(bn, 1.0);
  for (int j = 0; j < params.s; ++j) {
    const double g = params.gamma(j + 1);
    multiply_sigma_factors(prod, rule.q[static_cast<std::size_t>(j)], rule.p, g * g, sigma_tab,
                           rule.b, rule.m);
  }
  CompensatedSum acc;
  for (std::uint64_t n = 0; n < bn; ++n) acc.add(prod[n]);
  return acc.value() / static_cast<double>(bn) - 1.0;
}

namespace {

// Residue encodings of k(x) q(x) mod p(x) for k = 0..kmax.
std::vector<std::uint32_t> residue_table(const GFPoly& q, const GFPoly& p, std::uint64_t kmax,
                                         std::uint32_t b) {
  const int digits = mu(kmax, b);
  std::vector<std::uint64_t> shift(static_cast<std::size_t>(digits));
  for (int t = 0; t < digits; ++t) {
    shift[static_cast<std::size_t>(t)] =
        mod(mul(pow_x_mod(static_cast<std::uint64_t>(t), p), q), p).encoding();
  }
  std::vector<std::uint32_t> res(kmax + 1, 0);
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    std::uint64_t tmp = k, place = 1;
    int t = 0;
    while (tmp % b == 0) {
      tmp /= b;
      place *= b;
      ++t;
    }
    const std::uint64_t d = tmp % b;
    const std::uint64_t rest = k - d * place;
    std::uint64_t acc = 0;
    for (std::uint64_t i = 0; i < d; ++i) {
      acc = detail::enc_add(acc, shift[static_cast<std::size_t>(t)], b);
    }
    res[k] = static_cast<std::uint32_t>(detail::enc_add(res[rest], acc, b));
  }
  return res;
}

}  // namespace

double criterion_walsh_oracle(const SpaceParams& params, const PolyLatticeRule& rule,
                              std::uint64_t kmax) {
  params.validate();
  rule.validate();
  if (params.s != rule.s()) {
    throw std::invalid_argument("rule dimension does not match space dimension");
  }
  if (params.s > 3) {
    throw std::invalid_argument("criterion_walsh_oracle refuses s > 3 (cost guard)");
  }
  const std::uint32_t b = rule.b;
  const std::uint64_t bn = rule.n_points();

  // Per-dimension residue tables and weight factors 1/f_j(k)^2.
  std::vector<std::vector<std::uint32_t>> res(static_cast<std::size_t>(params.s));
  std::vector<std::vector<double>> inv_f2(static_cast<std::size_t>(params.s));
  for (int j = 0; j < params.s; ++j) {
    res[static_cast<std::size_t>(j)] =
        residue_table(rule.q[static_cast<std::size_t>(j)], rule.p, kmax, b);
    auto& w = inv_f2[static_cast<std::size_t>(j)];
    w.assign(kmax + 1, 0.0);
    const double gamma = params.gamma(j + 1);
    w[0] = 1.0;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
      if (gamma == 0.0) continue;  // infinite weight, zero contribution
      const double f = std::pow(static_cast<double>(b), params.alpha * mu(k, b)) / gamma;
      w[k] = 1.0 / (f * f);
    }
  }

  if (params.s == 1) {
    CompensatedSum acc;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
      if (res[0][k] == 0) acc.add(inv_f2[0][k]);
    }
    return acc.value();
  }

  // Bucket the last dimension by residue.
  std::vector<double> bucket(bn, 0.0);
  const auto& last_res = res[static_cast<std::size_t>(params.s - 1)];
  const auto& last_w = inv_f2[static_cast<std::size_t>(params.s - 1)];
  for (std::uint64_t k = 0; k <= kmax; ++k) bucket[last_res[k]] += last_w[k];

  CompensatedSum acc;
  if (params.s == 2) {
    for (std::uint64_t k = 0; k <= kmax; ++k) {
      const std::uint64_t need = detail::enc_neg(res[0][k], b);
      acc.add(inv_f2[0][k] * bucket[need]);
    }
  } else {
    for (std::uint64_t k1 = 0; k1 <= kmax; ++k1) {
      if (inv_f2[0][k1] == 0.0) continue;
      for (std::uint64_t k2 = 0; k2 <= kmax; ++k2) {
        const std::uint64_t sum12 = detail::enc_add(res[0][k1], res[1][k2], b);
        const std::uint64_t need = detail::enc_neg(sum12, b);
        acc.add(inv_f2[0][k1] * inv_f2[1][k2] * bucket[need]);
      }
    }
  }
  return acc.value() - 1.0;  // remove the all-zero vector
}

namespace {

void check_walsh_bound_args(const SpaceParams& params, std::uint32_t b, int m, double tau,
                            double lambda) {
  params.validate();
  if (b < 2) throw std::invalid_argument("base must be at least 2");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");
  if (!(lambda >= 0.5 && lambda < params.alpha)) {
    throw std::invalid_argument("lambda must lie in [1/2, alpha)");
  }
}

}  // namespace

double walsh_wce_bound(const SpaceParams& params, std::uint32_t b, int m, double tau,
                       double lambda) {
  check_walsh_bound_args(params, b, m, tau, lambda);
  const double bb = static_cast<double>(b);
  const double c = (bb - 1.0) / (std::pow(bb, params.alpha / lambda) - bb);
  double prod = 1.0;
  for (int j = 1; j <= params.s; ++j) {
    const double g = params.gamma(j);
    prod *= 1.0 + (g > 0.0 ? std::pow(g, 1.0 / lambda) * c : 0.0);
  }
  const double subset_sum = prod - 1.0;
  const double denom = (1.0 - tau) * (std::pow(bb, m) - 1.0);
  return std::pow(subset_sum / denom, lambda);
}

WalshDStarResult walsh_d_star(const SpaceParams& params, std::uint32_t b, int m, double tau,
                              std::span<const double> lambda_grid) {
  if (lambda_grid.empty()) {
    throw std::invalid_argument("walsh_d_star requires a non-empty lambda grid");
  }
  WalshDStarResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    const double v = walsh_wce_bound(params, b, m, tau, lambda);
    if (v < best.value) {
      best.value = v;
      best.argmin_lambda = lambda;
    }
  }
  best.assumption_holds = best.value <= 1.0;
  return best;
}

}  // namespace rqmc
