#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rqmc/params.hpp"

namespace rqmc {

/// Rank-1 lattice rule: N points {n z / N}, n = 0..N-1.
struct LatticeRule {
  std::uint64_t N = 0;
  std::vector<std::uint32_t> z;

  int s() const { return static_cast<int>(z.size()); }

  /// Throws unless N >= 2 and every z_j lies in {1,...,N-1}.
  void validate() const;
};

/// r_{alpha,gamma}(k) = prod_{j: k_j != 0} |k_j|^alpha / gamma_j with the
/// empty product equal to 1. Coordinates with gamma_j = 0 and k_j != 0
/// give +infinity (the 0/0 = 0 convention for reciprocals).
double r_weight(const SpaceParams& params, std::span<const std::int64_t> k);

/// Table of one-dimensional kernel weights omega_alpha(n/N), n = 0..N-1.
std::vector<double> kernel_weight_table(double alpha, std::uint64_t N);

/// Squared worst-case error of the rule in the weighted Korobov space,
/// evaluated through the kernel identity
///   R = -1 + (1/N) sum_n prod_j [1 + gamma_j^2 omega_alpha({n z_j / N})],
/// which equals the dual-lattice sum of 1/r^2. Cost O(s N) given the
/// precomputed weight table.
double criterion_kernel(const SpaceParams& params, const LatticeRule& rule);

/// Brute-force dual-lattice sum over 0 < |k|_inf <= kmax; test oracle
/// only (s <= 3 enforced, kmax >= N required).
double criterion_oracle(const SpaceParams& params, const LatticeRule& rule, std::uint64_t kmax);

/// Worst-case error bound for rules from the randomized CBC construction:
///   ( 2/((1-tau) M) * [prod_j (1 + gamma_j^{1/lambda} 2 zeta(alpha/lambda)) - 1] )^lambda
/// valid for 1/2 <= lambda < alpha.
double wce_bound(const SpaceParams& params, std::uint64_t M, double tau, double lambda);

struct DStarResult {
  double value = 0.0;           // minimum of the bound over the grid
  double argmin_lambda = 0.0;
  bool assumption_holds = false;  // true iff the minimum is <= 1
};

/// Grid minimum of wce_bound over lambda; assumption_holds reports the
/// size condition under which the randomized-error analysis applies.
DStarResult d_star(const SpaceParams& params, std::uint64_t M, double tau,
                   std::span<const double> lambda_grid);

/// 41 equispaced lambda values in [1/2, alpha - 0.01].
std::vector<double> default_lambda_grid(double alpha);

}  // namespace rqmc
