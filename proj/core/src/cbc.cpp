#include "rqmc/cbc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "rqmc/numtheory.hpp"
#include "rqmc/threading.hpp"

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

constexpr std::size_t kBlock = 4096;

double compensated_total(const std::vector<double>& v) {
  CompensatedSum acc;
  std::size_t n = 0;
  while (n < v.size()) {
    const std::size_t end = std::min(v.size(), n + kBlock);
    double blk = 0.0;
    for (; n < end; ++n) blk += v[n];
    acc.add(blk);
  }
  return acc.value();
}

std::size_t candidate_take(double tau, std::uint64_t pool) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("tau must lie in (0,1)");
  }
  const double raw = std::ceil(tau * static_cast<double>(pool));
  return static_cast<std::size_t>(std::min<double>(raw, static_cast<double>(pool)));
}

// R(z_prefix, c) = -1 + (1/N) sum_n theta[n] (1 + gamma^2 w[(n c) mod N]),
// with theta the cached products over the prefix coordinates.
double lattice_candidate_value(const std::vector<double>& theta, const std::vector<double>& w,
                               std::uint64_t N, std::uint64_t c, double gamma_sq,
                               double theta_total) {
  CompensatedSum acc;
  std::uint64_t idx = 0;
  std::uint64_t n = 0;
  while (n < N) {
    const std::uint64_t end = std::min<std::uint64_t>(N, n + kBlock);
    double blk = 0.0;
    for (; n < end; ++n) {
      blk += theta[n] * w[idx];
      idx += c;
      if (idx >= N) idx -= N;
    }
    acc.add(blk);
  }
  return (theta_total + gamma_sq * acc.value()) / static_cast<double>(N) - 1.0;
}

// Candidate criterion values for the next lattice coordinate. The
// criterion is invariant under c -> N - c (the dual lattice maps to
// itself under k -> -k), so only half of the candidates are evaluated
// and the value is shared with the mirror; exact ties between mirrors
// then resolve to the smaller component, matching exact arithmetic.
std::vector<double> lattice_candidate_values(const std::vector<double>& theta,
                                             const std::vector<double>& w, std::uint64_t N,
                                             double gamma_sq, int threads) {
  const double theta_total = compensated_total(theta);
  std::vector<double> values(N - 1);
  const std::uint64_t half = N / 2;
  parallel_for(half, threads, [&](std::size_t i) {
    const std::uint64_t c = static_cast<std::uint64_t>(i) + 1;
    const double v = lattice_candidate_value(theta, w, N, c, gamma_sq, theta_total);
    values[c - 1] = v;
    if (N - c != c) values[N - c - 1] = v;
  });
  return values;
}

std::vector<std::pair<double, std::uint32_t>> sort_lattice_candidates(
    const std::vector<double>& values) {
  std::vector<std::pair<double, std::uint32_t>> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = {values[i], static_cast<std::uint32_t>(i + 1)};
  }
  std::sort(out.begin(), out.end());
  return out;
}

void lattice_update_theta(std::vector<double>& theta, const std::vector<double>& w,
                          std::uint64_t N, std::uint64_t c, double gamma_sq) {
  std::uint64_t idx = 0;
  for (std::uint64_t n = 0; n < N; ++n) {
    theta[n] *= 1.0 + gamma_sq * w[idx];
    idx += c;
    if (idx >= N) idx -= N;
  }
}

}  // namespace

namespace detail {

std::vector<std::pair<double, std::uint32_t>> rank_lattice_candidates(
    const SpaceParams& params, std::uint64_t N, const std::vector<std::uint32_t>& z_prefix,
    int threads) {
  if (z_prefix.empty()) {
    throw std::invalid_argument("candidate ranking needs at least one fixed coordinate");
  }
  if (static_cast<int>(z_prefix.size()) >= params.s) {
    throw std::invalid_argument("prefix already covers every coordinate");
  }
  const std::vector<double> w = kernel_weight_table(params.alpha, N);
  std::vector<double> theta(N, 1.0);
  for (std::size_t j = 0; j < z_prefix.size(); ++j) {
    const double g = params.gamma(static_cast<int>(j) + 1);
    lattice_update_theta(theta, w, N, z_prefix[j], g * g);
  }
  const double g = params.gamma(static_cast<int>(z_prefix.size()) + 1);
  return sort_lattice_candidates(lattice_candidate_values(theta, w, N, g * g, threads));
}

}  // namespace detail

std::pair<LatticeRule, CbcTrace> construct_lattice_with_modulus(const SpaceParams& params,
                                                                std::uint64_t N, double tau,
                                                                RandomSource& rng, int threads) {
  params.validate();
  if (N < 2) throw std::invalid_argument("modulus N must be >= 2");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");

  const std::vector<double> w = kernel_weight_table(params.alpha, N);
  std::vector<double> theta(N, 1.0);

  LatticeRule rule;
  rule.N = N;
  CbcTrace trace;
  trace.modulus = N;

  // z_1 = 1.
  {
    const double g = params.gamma(1);
    const double r1 = lattice_candidate_value(theta, w, N, 1, g * g, static_cast<double>(N));
    lattice_update_theta(theta, w, N, 1, g * g);
    rule.z.push_back(1);
    trace.dims.push_back({1, 1, 1, r1});
  }

  for (int dim = 2; dim <= params.s; ++dim) {
    const double g = params.gamma(dim);
    const auto ranked =
        sort_lattice_candidates(lattice_candidate_values(theta, w, N, g * g, threads));
    const std::size_t take = candidate_take(tau, N - 1);
    const std::size_t pick = static_cast<std::size_t>(pick_uniform(rng, take));
    const std::uint32_t chosen = ranked[pick].second;
    lattice_update_theta(theta, w, N, chosen, g * g);
    rule.z.push_back(chosen);
    trace.dims.push_back({dim, take, chosen, ranked[pick].first});
  }
  return {std::move(rule), std::move(trace)};
}

std::pair<LatticeRule, CbcTrace> construct_lattice(const SpaceParams& params, std::uint64_t M,
                                                   double tau, RandomSource& rng, int threads) {
  const PrimeRange pool = primes_in_half_open_range(M);
  if (pool.empty()) {
    throw std::invalid_argument("no prime modulus available in (ceil(M/2), M]");
  }
  const std::uint64_t N = pool.primes[pick_uniform(rng, pool.primes.size())];
  return construct_lattice_with_modulus(params, N, tau, rng, threads);
}

namespace {

// x^{t} q mod p for t = 0..m-1, as bitmask encodings (base 2 only).
std::vector<std::uint64_t> shift_table2(std::uint64_t q_enc, std::uint64_t p_enc, int m) {
  std::vector<std::uint64_t> shift(static_cast<std::size_t>(m));
  const std::uint64_t top = 1ULL << m;
  std::uint64_t cur = q_enc;
  for (int t = 0; t < m; ++t) {
    shift[static_cast<std::size_t>(t)] = cur;
    cur <<= 1;
    if (cur & top) cur ^= p_enc;  // p_enc has the x^m bit set
  }
  return shift;
}

// T(q) = sum_n theta[n] * sigma[res_q(n)] via a Gray-code walk (base 2).
double poly_candidate_value2(const std::vector<double>& theta, const std::vector<double>& stab,
                             const std::vector<std::uint64_t>& shift, std::uint64_t bn,
                             double gamma_sq, double theta_total) {
  CompensatedSum acc;
  double blk = theta[0] * stab[0];
  std::uint64_t res = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < bn; ++i) {
    const int bit = std::countr_zero(i);
    res ^= shift[static_cast<std::size_t>(bit)];
    gray ^= (1ULL << bit);
    blk += theta[gray] * stab[res];
    if ((i & (kBlock - 1)) == 0) {
      acc.add(blk);
      blk = 0.0;
    }
  }
  acc.add(blk);
  return (theta_total + gamma_sq * acc.value()) / static_cast<double>(bn) - 1.0;
}

void poly_update_theta2(std::vector<double>& theta, const std::vector<double>& stab,
                        const std::vector<std::uint64_t>& shift, std::uint64_t bn,
                        double gamma_sq) {
  theta[0] *= 1.0 + gamma_sq * stab[0];
  std::uint64_t res = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < bn; ++i) {
    const int bit = std::countr_zero(i);
    res ^= shift[static_cast<std::size_t>(bit)];
    gray ^= (1ULL << bit);
    theta[gray] *= 1.0 + gamma_sq * stab[res];
  }
}

// Residue table res[n] = enc(n(x) q(x) mod p) for any base.
std::vector<std::uint32_t> poly_residues(const GFPoly& q, const GFPoly& p, std::uint64_t bn,
                                         std::uint32_t b, int m) {
  std::vector<std::uint64_t> shift(static_cast<std::size_t>(m));
  GFPoly cur = mod(q, p);
  for (int t = 0; t < m; ++t) {
    shift[static_cast<std::size_t>(t)] = cur.encoding();
    cur = poly_mod_mul(cur, GFPoly::x(b), p);
  }
  std::vector<std::uint32_t> res(bn, 0);
  for (std::uint64_t n = 1; n < bn; ++n) {
    std::uint64_t tmp = n, place = 1;
    int t = 0;
    while (tmp % b == 0) {
      tmp /= b;
      place *= b;
      ++t;
    }
    const std::uint64_t d = tmp % b;
    const std::uint64_t rest = n - d * place;
    std::uint64_t acc = res[rest];
    for (std::uint64_t i = 0; i < d; ++i) {
      acc = detail::enc_add(acc, shift[static_cast<std::size_t>(t)], b);
    }
    res[n] = static_cast<std::uint32_t>(acc);
  }
  return res;
}

double poly_candidate_value_general(const std::vector<double>& theta,
                                    const std::vector<double>& stab,
                                    const std::vector<std::uint32_t>& res, std::uint64_t bn,
                                    double gamma_sq, double theta_total) {
  CompensatedSum acc;
  std::uint64_t n = 0;
  while (n < bn) {
    const std::uint64_t end = std::min<std::uint64_t>(bn, n + kBlock);
    double blk = 0.0;
    for (; n < end; ++n) blk += theta[n] * stab[res[n]];
    acc.add(blk);
  }
  return (theta_total + gamma_sq * acc.value()) / static_cast<double>(bn) - 1.0;
}

}  // namespace

namespace detail {

std::vector<std::pair<double, std::uint64_t>> rank_poly_candidates(
    const SpaceParams& params, const GFPoly& p, const std::vector<GFPoly>& q_prefix,
    int threads) {
  if (q_prefix.empty()) {
    throw std::invalid_argument("candidate ranking needs at least one fixed coordinate");
  }
  if (static_cast<int>(q_prefix.size()) >= params.s) {
    throw std::invalid_argument("prefix already covers every coordinate");
  }
  const std::uint32_t b = p.base();
  const int m = p.degree();
  std::uint64_t bn = 1;
  for (int i = 0; i < m; ++i) bn *= b;
  const auto stab = detail::sigma_table_by_residue(params.alpha, b, m);

  std::vector<double> theta(bn, 1.0);
  for (std::size_t j = 0; j < q_prefix.size(); ++j) {
    const double g = params.gamma(static_cast<int>(j) + 1);
    const auto res = poly_residues(q_prefix[j], p, bn, b, m);
    for (std::uint64_t n = 0; n < bn; ++n) theta[n] *= 1.0 + g * g * stab[res[n]];
  }
  const double g = params.gamma(static_cast<int>(q_prefix.size()) + 1);
  const double gamma_sq = g * g;
  const double theta_total = compensated_total(theta);

  std::vector<std::pair<double, std::uint64_t>> out(bn - 1);
  if (b == 2) {
    const std::uint64_t p_enc = p.encoding();
    parallel_for(bn - 1, threads, [&](std::size_t i) {
      const std::uint64_t q_enc = static_cast<std::uint64_t>(i) + 1;
      const auto shift = shift_table2(q_enc, p_enc, m);
      out[i] = {poly_candidate_value2(theta, stab, shift, bn, gamma_sq, theta_total), q_enc};
    });
  } else {
    for (std::uint64_t q_enc = 1; q_enc < bn; ++q_enc) {
      const auto res = poly_residues(GFPoly::from_encoding(q_enc, b), p, bn, b, m);
      out[q_enc - 1] = {poly_candidate_value_general(theta, stab, res, bn, gamma_sq, theta_total),
                        q_enc};
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

std::pair<PolyLatticeRule, CbcTrace> construct_poly_lattice_with_modulus(
    const SpaceParams& params, const GFPoly& p, double tau, RandomSource& rng, int threads) {
  params.validate();
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");
  const std::uint32_t b = p.base();
  const int m = p.degree();
  if (m < 1) throw std::invalid_argument("modulus must have degree >= 1");
  if (!p.is_monic() || !is_irreducible(p)) {
    throw std::invalid_argument("modulus must be monic irreducible");
  }
  if (params.s >= 2 && p == GFPoly::x(b)) {
    throw std::invalid_argument(
        "modulus p = x has no infinite-precision criterion; use a larger degree");
  }
  std::uint64_t bn = 1;
  for (int i = 0; i < m; ++i) bn *= b;
  const auto stab = detail::sigma_table_by_residue(params.alpha, b, m);

  PolyLatticeRule rule;
  rule.b = b;
  rule.m = m;
  rule.p = p;
  CbcTrace trace;
  trace.modulus = p.encoding();

  std::vector<double> theta(bn, 1.0);

  // q_1 = 1: the residue of n(x) * 1 is n(x) itself.
  {
    const double g = params.gamma(1);
    CompensatedSum acc;
    for (std::uint64_t n = 0; n < bn; ++n) {
      theta[n] = 1.0 + g * g * stab[n];
      acc.add(theta[n]);
    }
    rule.q.push_back(GFPoly::one(b));
    trace.dims.push_back({1, 1, 1, acc.value() / static_cast<double>(bn) - 1.0});
  }

  for (int dim = 2; dim <= params.s; ++dim) {
    const double g = params.gamma(dim);
    const double gamma_sq = g * g;
    const double theta_total = compensated_total(theta);

    std::vector<std::pair<double, std::uint64_t>> ranked(bn - 1);
    if (b == 2) {
      const std::uint64_t p_enc = p.encoding();
      parallel_for(bn - 1, threads, [&](std::size_t i) {
        const std::uint64_t q_enc = static_cast<std::uint64_t>(i) + 1;
        const auto shift = shift_table2(q_enc, p_enc, m);
        ranked[i] = {poly_candidate_value2(theta, stab, shift, bn, gamma_sq, theta_total), q_enc};
      });
    } else {
      for (std::uint64_t q_enc = 1; q_enc < bn; ++q_enc) {
        const auto res = poly_residues(GFPoly::from_encoding(q_enc, b), p, bn, b, m);
        ranked[q_enc - 1] = {
            poly_candidate_value_general(theta, stab, res, bn, gamma_sq, theta_total), q_enc};
      }
    }
    std::sort(ranked.begin(), ranked.end());

    const std::size_t take = candidate_take(tau, bn - 1);
    const std::size_t pick = static_cast<std::size_t>(pick_uniform(rng, take));
    const std::uint64_t chosen = ranked[pick].second;

    if (b == 2) {
      poly_update_theta2(theta, stab, shift_table2(chosen, p.encoding(), m), bn, gamma_sq);
    } else {
      const auto res = poly_residues(GFPoly::from_encoding(chosen, b), p, bn, b, m);
      for (std::uint64_t n = 0; n < bn; ++n) theta[n] *= 1.0 + gamma_sq * stab[res[n]];
    }
    rule.q.push_back(GFPoly::from_encoding(chosen, b));
    trace.dims.push_back({dim, take, chosen, ranked[pick].first});
  }
  return {std::move(rule), std::move(trace)};
}

std::pair<PolyLatticeRule, CbcTrace> construct_poly_lattice(const SpaceParams& params,
                                                            std::uint32_t b, int m, double tau,
                                                            RandomSource& rng, int threads) {
  const auto pool = enumerate_monic_irreducibles(b, m);
  if (pool.empty()) {
    throw std::invalid_argument("no monic irreducible modulus of the requested degree");
  }
  const GFPoly& p = pool[pick_uniform(rng, pool.size())];
  return construct_poly_lattice_with_modulus(params, p, tau, rng, threads);
}

}  // namespace rqmc
