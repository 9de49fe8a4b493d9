#include "rqmc/numtheory.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include <doctest.h>

#include "oracles.hpp"
#include "rqmc/random.hpp"

using namespace rqmc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("prime pool examples") {
  CHECK(primes_in_half_open_range(20).primes == std::vector<std::uint64_t>{11, 13, 17, 19});
  CHECK(primes_in_half_open_range(10).primes == std::vector<std::uint64_t>{7});
  // Small-M table: the interval (ceil(M/2), M] is never empty for M >= 2.
  CHECK(primes_in_half_open_range(2).primes == std::vector<std::uint64_t>{2});
  CHECK(primes_in_half_open_range(3).primes == std::vector<std::uint64_t>{3});
  CHECK(primes_in_half_open_range(4).primes == std::vector<std::uint64_t>{3});
  for (std::uint64_t M = 2; M <= 30; ++M) {
    CHECK(!primes_in_half_open_range(M).empty());
  }
  CHECK_THROWS(primes_in_half_open_range(1));
}

TEST_CASE("prime pool agrees with trial division") {
  for (std::uint64_t M = 2; M <= 10000; M = (M < 100 ? M + 1 : M + 97)) {
    const auto range = primes_in_half_open_range(M);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = (M + 1) / 2 + 1; n <= M; ++n) {
      if (oracles::trial_division_is_prime(n)) expected.push_back(n);
    }
    REQUIRE(range.primes == expected);
  }
  // Exhaustive over the full range used by small tests.
  for (std::uint64_t M = 2; M <= 512; ++M) {
    const auto range = primes_in_half_open_range(M);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = (M + 1) / 2 + 1; n <= M; ++n) {
      if (oracles::trial_division_is_prime(n)) expected.push_back(n);
    }
    REQUIRE(range.primes == expected);
  }
}

TEST_CASE("riemann zeta closed forms and oracle") {
  CHECK(riemann_zeta(2.0) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-13));
  CHECK(riemann_zeta(4.0) == doctest::Approx(kPi * kPi * kPi * kPi / 90.0).epsilon(1e-13));
  // Independent oracle: direct summation with a tail correction.
  CHECK(riemann_zeta(3.0) == doctest::Approx(oracles::zeta_direct(3.0, 1'000'000)).epsilon(1e-10));
  CHECK(riemann_zeta(3.0) == doctest::Approx(1.2020569031595943).epsilon(1e-12));
  CHECK(riemann_zeta(1.5) == doctest::Approx(oracles::zeta_direct(1.5, 4'000'000)).epsilon(1e-9));
  CHECK_THROWS_AS(riemann_zeta(1.0), std::domain_error);
  CHECK_THROWS_AS(riemann_zeta(0.5), std::domain_error);
}

TEST_CASE("riemann zeta is >= 1 and strictly decreasing on a grid") {
  double prev = std::numeric_limits<double>::infinity();
  for (double x = 1.1; x <= 8.0 + 1e-9; x += 0.1) {
    const double v = riemann_zeta(x);
    CHECK(v >= 1.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("bernoulli polynomial values") {
  CHECK(bernoulli_value(2, 0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(bernoulli_value(2, 0.5) == doctest::Approx(-1.0 / 12.0).epsilon(1e-15));
  CHECK(bernoulli_value(4, 0.5) == doctest::Approx(7.0 / 240.0).epsilon(1e-14));
  CHECK_THROWS(bernoulli_value(3, 0.5));
  CHECK_THROWS(bernoulli_value(10, 0.5));
}

TEST_CASE("bernoulli polynomials integrate to zero and are periodic") {
  for (int deg : {2, 4, 6, 8}) {
    // Composite Simpson with a fine grid is plenty for polynomials.
    const int n = 2000;
    double sum = bernoulli_value(deg, 0.0) + bernoulli_value(deg, 1.0);
    for (int i = 1; i < n; ++i) {
      sum += bernoulli_value(deg, static_cast<double>(i) / n) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    CHECK(std::abs(sum / (3.0 * n)) < 1e-12);
    CHECK(bernoulli_value(deg, 0.0) == doctest::Approx(bernoulli_value(deg, 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("kernel weight closed forms at t = 0") {
  CHECK(korobov_kernel_weight(1.0, 0.0) == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-13));
  // Sign check for even alpha: the closed form must match 2 zeta(4) > 0.
  CHECK(korobov_kernel_weight(2.0, 0.0) ==
        doctest::Approx(kPi * kPi * kPi * kPi / 45.0).epsilon(1e-13));
  CHECK(korobov_kernel_weight(3.0, 0.0) == doctest::Approx(2.0 * riemann_zeta(6.0)).epsilon(1e-13));
  CHECK(korobov_kernel_weight(4.0, 0.0) == doctest::Approx(2.0 * riemann_zeta(8.0)).epsilon(1e-13));
  CHECK_THROWS_AS(korobov_kernel_weight(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(korobov_kernel_weight(1.0, 1.0), std::domain_error);
}

TEST_CASE("kernel weight for non-integer alpha matches a long direct sum") {
  const double series = oracles::kernel_weight_series_oracle_real(3.0, 0.25, 10'000'000);
  CHECK(korobov_kernel_weight(1.5, 0.25) == doctest::Approx(series).epsilon(1e-8));
  CHECK(korobov_kernel_weight(1.5, 0.0) == doctest::Approx(2.0 * riemann_zeta(3.0)).epsilon(1e-12));
}

TEST_CASE("closed form equals the truncated series at 1000 random points") {
  constexpr std::size_t kTerms = 1'000'000;
  oracles::inv_square_table(kTerms);  // build the shared table once
  RandomSource rng(20240817);
  std::vector<double> ts(1000);
  for (auto& t : ts) {
    t = rng.next_double01();
    if (t == 0.0) t = 0.5;
  }
  for (int alpha = 1; alpha <= 4; ++alpha) {
    std::vector<double> worst(4, 0.0);
    const unsigned workers = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    std::vector<double> max_err(workers, 0.0);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < ts.size(); i += workers) {
          const double closed = korobov_kernel_weight(static_cast<double>(alpha), ts[i]);
          const double series = oracles::kernel_weight_series_oracle(alpha, ts[i], kTerms);
          max_err[w] = std::max(max_err[w], std::abs(closed - series));
        }
      });
    }
    for (auto& t : pool) t.join();
    double err = 0.0;
    for (double e : max_err) err = std::max(err, e);
    CHECK(err <= 1e-6);
  }
}
