#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rqmc/gfpoly.hpp"
#include "rqmc/korobov.hpp"
#include "rqmc/params.hpp"
#include "rqmc/random.hpp"
#include "rqmc/walsh.hpp"

namespace rqmc {

/// Audit trail of one randomized CBC run.
struct CbcDimTrace {
  int dim = 0;
  std::size_t candidate_count = 0;  // ceil(tau * (pool size))
  std::uint64_t chosen = 0;         // component (z_l, or encoding of q_l)
  double criterion = 0.0;           // criterion of the first `dim` coordinates
};

struct CbcTrace {
  std::uint64_t modulus = 0;  // N, or the encoding of p
  std::vector<CbcDimTrace> dims;

  double final_criterion() const { return dims.empty() ? 0.0 : dims.back().criterion; }
};

/// Randomized CBC for rank-1 lattice rules: draws N uniformly from the
/// primes in (ceil(M/2), M], sets z_1 = 1, then for each further
/// coordinate evaluates the worst-case-error criterion for every
/// candidate, keeps the best ceil(tau (N-1)) of them (ties broken by
/// ascending z) and picks one uniformly. O(s N^2) total.
std::pair<LatticeRule, CbcTrace> construct_lattice(const SpaceParams& params, std::uint64_t M,
                                                   double tau, RandomSource& rng,
                                                   int threads = 1);

/// Same construction with the modulus fixed by the caller.
std::pair<LatticeRule, CbcTrace> construct_lattice_with_modulus(const SpaceParams& params,
                                                                std::uint64_t N, double tau,
                                                                RandomSource& rng,
                                                                int threads = 1);

/// Randomized CBC for rank-1 polynomial lattice rules: draws the modulus
/// uniformly from the monic irreducibles of degree m, sets q_1 = 1, then
/// proceeds as above over the b^m - 1 nonzero polynomials of degree < m
/// with ascending-encoding tie-break.
std::pair<PolyLatticeRule, CbcTrace> construct_poly_lattice(const SpaceParams& params,
                                                            std::uint32_t b, int m, double tau,
                                                            RandomSource& rng, int threads = 1);

std::pair<PolyLatticeRule, CbcTrace> construct_poly_lattice_with_modulus(
    const SpaceParams& params, const GFPoly& p, double tau, RandomSource& rng, int threads = 1);

namespace detail {

/// Criterion values for every candidate next component given a prefix,
/// sorted ascending with ascending-component tie-break. Exposed so tests
/// can check the candidate-set property directly.
std::vector<std::pair<double, std::uint32_t>> rank_lattice_candidates(
    const SpaceParams& params, std::uint64_t N, const std::vector<std::uint32_t>& z_prefix,
    int threads = 1);

std::vector<std::pair<double, std::uint64_t>> rank_poly_candidates(
    const SpaceParams& params, const GFPoly& p, const std::vector<GFPoly>& q_prefix,
    int threads = 1);

}  // namespace detail

}  // namespace rqmc
