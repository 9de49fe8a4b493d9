#include "rqmc/korobov.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "oracles.hpp"
#include "rqmc/numtheory.hpp"
#include "rqmc/pointset.hpp"
#include "rqmc/random.hpp"

using namespace rqmc;

namespace {

constexpr double kPi = std::numbers::pi;

SpaceParams make_params(double alpha, std::vector<double> gammas) {
  SpaceParams p;
  p.alpha = alpha;
  p.s = static_cast<int>(gammas.size());
  p.weights = Weights::list(std::move(gammas));
  return p;
}

}  // namespace

TEST_CASE("r_weight examples") {
  const SpaceParams params = make_params(2.0, {0.5, 0.25});
  CHECK(r_weight(params, std::vector<std::int64_t>{0, 0}) == 1.0);
  CHECK(r_weight(params, std::vector<std::int64_t>{3, 0}) == doctest::Approx(18.0));
  CHECK(r_weight(params, std::vector<std::int64_t>{3, -2}) == doctest::Approx(288.0));
  CHECK_THROWS(r_weight(params, std::vector<std::int64_t>{1}));

  const SpaceParams zero = make_params(2.0, {0.0});
  CHECK(std::isinf(r_weight(zero, std::vector<std::int64_t>{2})));
  CHECK(r_weight(zero, std::vector<std::int64_t>{0}) == 1.0);
}

TEST_CASE("criterion closed forms in one dimension") {
  // With z = 1 and prime N the dual lattice is N Z, so the squared
  // worst-case error is 2 gamma^2 zeta(2 alpha) / N^{2 alpha}.
  LatticeRule rule{5, {1}};
  CHECK(criterion_kernel(make_params(1.0, {1.0}), rule) ==
        doctest::Approx(kPi * kPi / 75.0).epsilon(1e-12));
  CHECK(criterion_kernel(make_params(2.0, {1.0}), rule) ==
        doctest::Approx(kPi * kPi * kPi * kPi / (45.0 * 625.0)).epsilon(1e-12));
  CHECK(criterion_kernel(make_params(2.0, {0.0, 0.0}), LatticeRule{5, {1, 2}}) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("criterion oracle examples") {
  const SpaceParams params = make_params(1.0, {1.0});
  LatticeRule rule{5, {1}};
  double expected = 0.0;
  for (int k = 1; k <= 10; ++k) expected += 2.0 / std::pow(5.0 * k, 2.0);
  CHECK(criterion_oracle(params, rule, 50) == doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS(criterion_oracle(make_params(1.0, {1, 1, 1, 1}), LatticeRule{5, {1, 2, 3, 4}}, 50));
  CHECK_THROWS(criterion_oracle(params, rule, 3));  // kmax < N
}

TEST_CASE("kernel agrees with the truncated dual sum oracle") {
  RandomSource rng(42);
  const double z2 = riemann_zeta(2.0), z4 = riemann_zeta(4.0);
  for (int alpha = 1; alpha <= 2; ++alpha) {
    const SpaceParams params = make_params(alpha, {1.0, 0.5});
    const double tail = oracles::korobov_box_tail(params, 200, alpha == 1 ? z2 : z4);
    for (std::uint64_t N : {5ull, 7ull, 11ull, 13ull}) {
      for (int trial = 0; trial < 5; ++trial) {
        LatticeRule rule{N,
                         {static_cast<std::uint32_t>(1 + pick_uniform(rng, N - 1)),
                          static_cast<std::uint32_t>(1 + pick_uniform(rng, N - 1))}};
        const double kernel = criterion_kernel(params, rule);
        const double oracle = criterion_oracle(params, rule, 200);
        CHECK(std::abs(kernel - oracle) <= tail + 1e-12);
        CHECK(kernel >= 0.0);
      }
    }
  }
}

TEST_CASE("kernel agrees with the pair-sum route") {
  const SpaceParams params = make_params(2.0, {1.0, 0.5});
  for (std::uint64_t N : {5ull, 9ull, 13ull}) {
    LatticeRule rule{N, {1, static_cast<std::uint32_t>(N - 2)}};
    const PointSet ps = lattice_points(rule);
    const double pair = oracles::kernel_pair_sum(params, ps, &korobov_kernel_weight);
    CHECK(criterion_kernel(params, rule) == doctest::Approx(pair).epsilon(1e-10));
  }
}

TEST_CASE("criterion is invariant under z -> N - z") {
  const SpaceParams params1 = make_params(2.0, {0.8});
  const SpaceParams params2 = make_params(2.0, {0.8, 0.45});
  for (std::uint64_t N = 3; N <= 13; ++N) {
    for (std::uint32_t z1 = 1; z1 < N; ++z1) {
      const double a = criterion_kernel(params1, LatticeRule{N, {z1}});
      const double b =
          criterion_kernel(params1, LatticeRule{N, {static_cast<std::uint32_t>(N - z1)}});
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
      for (std::uint32_t z2 = 1; z2 < N; ++z2) {
        const double c = criterion_kernel(params2, LatticeRule{N, {z1, z2}});
        const double d = criterion_kernel(
            params2,
            LatticeRule{N,
                        {static_cast<std::uint32_t>(N - z1), static_cast<std::uint32_t>(N - z2)}});
        CHECK(c == doctest::Approx(d).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("character property brute force") {
  RandomSource rng(99);
  for (std::uint64_t N : primes_in_half_open_range(20).primes) {
    const LatticeRule rule{N,
                           {static_cast<std::uint32_t>(1 + pick_uniform(rng, N - 1)),
                            static_cast<std::uint32_t>(1 + pick_uniform(rng, N - 1))}};
    const PointSet ps = lattice_points(rule);
    for (std::int64_t k1 = -static_cast<std::int64_t>(N); k1 <= static_cast<std::int64_t>(N);
         ++k1) {
      for (std::int64_t k2 = -static_cast<std::int64_t>(N); k2 <= static_cast<std::int64_t>(N);
           ++k2) {
        std::complex<double> sum = 0.0;
        for (std::size_t n = 0; n < ps.n; ++n) {
          const double phase = 2.0 * kPi * (k1 * ps(n, 0) + k2 * ps(n, 1));
          sum += std::complex<double>(std::cos(phase), std::sin(phase));
        }
        sum /= static_cast<double>(N);
        const std::int64_t dot = k1 * rule.z[0] + k2 * rule.z[1];
        const bool in_dual = ((dot % static_cast<std::int64_t>(N)) + N) % N == 0;
        REQUIRE(std::abs(sum - (in_dual ? 1.0 : 0.0)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("worst-case error bound examples") {
  const SpaceParams params = make_params(2.0, {1.0});
  const double expected = 0.04 * 2.0 * riemann_zeta(2.0);
  CHECK(wce_bound(params, 100, 0.5, 1.0) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(wce_bound(params, 200, 0.5, 1.0) ==
        doctest::Approx(wce_bound(params, 100, 0.5, 1.0) / 2.0).epsilon(1e-13));
  CHECK(wce_bound(make_params(2.0, {0.0, 0.0}), 100, 0.5, 1.0) == 0.0);
  CHECK_THROWS(wce_bound(params, 100, 0.5, 2.0));   // lambda >= alpha
  CHECK_THROWS(wce_bound(params, 100, 0.5, 0.25));  // lambda < 1/2
  CHECK_THROWS(wce_bound(params, 100, 1.0, 1.0));   // tau out of range
}

TEST_CASE("d_star grid minimum and assumption flag") {
  const SpaceParams params = make_params(2.0, {1.0});
  const std::vector<double> single{1.0};
  CHECK(d_star(params, 100, 0.5, single).value ==
        doctest::Approx(wce_bound(params, 100, 0.5, 1.0)));

  const auto grid = default_lambda_grid(2.0);
  CHECK(grid.size() == 41);
  CHECK(grid.front() == doctest::Approx(0.5));
  CHECK(grid.back() == doctest::Approx(1.99));
  const auto d = d_star(params, 100, 0.5, grid);
  for (double lambda : grid) {
    CHECK(d.value <= wce_bound(params, 100, 0.5, lambda) + 1e-15);
  }

  // M = 4 is too small: the bound exceeds 1 for every lambda.
  const auto bad = d_star(params, 4, 0.5, grid);
  CHECK(bad.value > 1.0);
  CHECK_FALSE(bad.assumption_holds);
  CHECK(d_star(params, 100000, 0.5, grid).assumption_holds);

  CHECK_THROWS(d_star(params, 100, 0.5, std::vector<double>{}));
}
