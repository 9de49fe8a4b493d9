#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rqmc/gfpoly.hpp"
#include "rqmc/params.hpp"

namespace rqmc {

/// Rank-1 polynomial lattice rule: modulus p of degree m over F_b and
/// generating vector q with deg(q_j) < m; b^m points.
struct PolyLatticeRule {
  std::uint32_t b = 2;
  int m = 0;
  GFPoly p{2};
  std::vector<GFPoly> q;

  int s() const { return static_cast<int>(q.size()); }
  std::uint64_t n_points() const;

  /// Throws unless deg(p) = m >= 1 and every q_j is nonzero of degree < m.
  void validate() const;
};

/// Number of base-b digits of k; mu(0) = 0 by convention.
int mu(std::uint64_t k, std::uint32_t b);

/// r~_{alpha,gamma}(k) = prod_{j: k_j != 0} b^{alpha mu(k_j)} / gamma_j,
/// empty product 1; +infinity where gamma_j = 0 meets k_j != 0.
double r_tilde(const SpaceParams& params, std::uint32_t b, std::span<const std::uint64_t> k);

/// One-dimensional Walsh function wal_k at a point given by its base-b
/// digit expansion x = xi_1/b + xi_2/b^2 + ...; result on the unit circle.
std::complex<double> walsh_eval(std::uint64_t k, std::span<const std::uint8_t> digits,
                                std::uint32_t b);

/// wal_k at a real x in [0,1); throws when the required digits cannot be
/// extracted unambiguously from the floating representation.
std::complex<double> walsh_eval_real(std::uint64_t k, double x, std::uint32_t b);

/// Base-b digits xi_1..xi_count of x in [0,1). Flags points too close to a
/// digit boundary for a reliable expansion.
std::vector<std::uint8_t> base_digits_of_real(double x, std::uint32_t b, std::size_t count);

/// Kernel weight of the weighted Walsh space,
///   sigma(x) = sum_{k>=1} b^{-2 alpha mu(k)} wal_k(x-).
/// Depends only on the index r of the first nonzero digit of the
/// expansion; r = 0 encodes x = 0. Requires alpha > 1/2.
double sigma_weight(double alpha, std::uint32_t b, int first_nonzero_index);

/// Squared worst-case error of the infinite-precision rule in the
/// weighted Walsh space via
///   R~ = -1 + (1/b^m) sum_n prod_j [1 + gamma_j^2 sigma(x_{n,j})],
/// using only cached first-nonzero-digit indices (at most m per point).
/// Requires p irreducible and p != x.
double criterion_walsh_kernel(const SpaceParams& params, const PolyLatticeRule& rule);

/// Brute-force dual sum over k in {0..kmax}^s \ {0} with membership
/// k(x) . q(x) = 0 (mod p(x)); test oracle only (s <= 3).
double criterion_walsh_oracle(const SpaceParams& params, const PolyLatticeRule& rule,
                              std::uint64_t kmax);

/// Worst-case error bound for rules from the randomized CBC construction:
///   ( 1/((1-tau)(b^m-1)) * [prod_j (1 + gamma_j^{1/lambda} c) - 1] )^lambda
/// with c = (b-1)/(b^{alpha/lambda} - b), for 1/2 <= lambda < alpha.
double walsh_wce_bound(const SpaceParams& params, std::uint32_t b, int m, double tau,
                       double lambda);

struct WalshDStarResult {
  double value = 0.0;
  double argmin_lambda = 0.0;
  bool assumption_holds = false;
};

/// Grid minimum of walsh_wce_bound over lambda.
WalshDStarResult walsh_d_star(const SpaceParams& params, std::uint32_t b, int m, double tau,
                              std::span<const double> lambda_grid);

namespace detail {

/// Digitwise sum mod b of two encodings (position-wise, no carries).
std::uint64_t enc_add(std::uint64_t a, std::uint64_t c, std::uint32_t b);

/// Digitwise negation mod b of an encoding.
std::uint64_t enc_neg(std::uint64_t a, std::uint32_t b);

/// sigma values by residue encoding: table[e] = sigma at a coordinate
/// whose residue v = e has first nonzero digit m - deg(v); table[0] is
/// sigma at the zero coordinate.
std::vector<double> sigma_table_by_residue(double alpha, std::uint32_t b, int m);

}  // namespace detail

}  // namespace rqmc
