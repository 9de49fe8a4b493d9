#pragma once

#include <cstdint>
#include <vector>

namespace rqmc {

/// The pool of prime moduli for a size parameter M: all primes N with
/// ceil(M/2) < N <= M, ascending and exhaustive.
struct PrimeRange {
  std::uint64_t M = 0;
  std::vector<std::uint64_t> primes;

  bool empty() const { return primes.empty(); }
  std::size_t size() const { return primes.size(); }
};

/// Exhaustive list of primes in (ceil(M/2), M]. May be empty only in
/// principle; brute force confirms non-emptiness for all small M and
/// Bertrand's postulate covers the rest. Callers that require a modulus
/// must still reject an empty pool.
PrimeRange primes_in_half_open_range(std::uint64_t M);

/// Riemann zeta for real x > 1 + 1e-9 (throws std::domain_error below).
/// Euler-Maclaurin accelerated; relative error around 1e-14.
double riemann_zeta(double x);

/// Bernoulli polynomial B_{2a}(x) for 2a in {2,4,6,8} and x in [0,1].
/// Exact polynomial evaluation; other degrees throw.
double bernoulli_value(int two_alpha, double x);

/// One-dimensional Korobov kernel weight
///   omega_alpha(t) = sum_{k != 0} e^{2 pi i k t} / |k|^{2 alpha}
///                  = 2 sum_{k >= 1} cos(2 pi k t) / k^{2 alpha}.
/// Closed Bernoulli form (-1)^{alpha+1} (2 pi)^{2 alpha} / (2 alpha)! *
/// B_{2 alpha}(t) for integer alpha in {1,2,3,4}; truncated cosine series
/// with tail below ~1e-10 otherwise. Requires alpha > 1/2, t in [0,1).
double korobov_kernel_weight(double alpha, double t);

}  // namespace rqmc
