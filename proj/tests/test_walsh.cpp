#include "rqmc/walsh.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include <doctest.h>

#include "rqmc/gfpoly.hpp"
#include "rqmc/pointset.hpp"
#include "rqmc/random.hpp"

using namespace rqmc;

namespace {

SpaceParams make_params(double alpha, std::vector<double> gammas) {
  SpaceParams p;
  p.alpha = alpha;
  p.s = static_cast<int>(gammas.size());
  p.weights = Weights::list(std::move(gammas));
  return p;
}

// Walsh series sum_{k=1}^{2^digits - 1} 2^{-2 alpha mu(k)} wal_k(x) for a
// base-2 digit stream given as a bitmask (bit i = digit i+1).
double sigma_series_base2(double alpha, std::uint64_t stream_mask, int digits) {
  double sum = 0.0;
  for (int a = 1; a <= digits; ++a) {
    const double w = std::pow(2.0, -2.0 * alpha * a);
    double level = 0.0;
    for (std::uint64_t k = 1ULL << (a - 1); k < (1ULL << a); ++k) {
      const int parity = std::popcount(k & stream_mask) & 1;
      level += parity ? -1.0 : 1.0;
    }
    sum += w * level;
  }
  return sum;
}

// Tail of the exact box sum: full one-dimensional weight sum minus the
// first kmax terms, combined over dimensions as a product difference.
double walsh_box_tail(const SpaceParams& params, std::uint32_t b, std::uint64_t kmax) {
  const double bb = static_cast<double>(b);
  const double full1 = (bb - 1.0) / (std::pow(bb, 2.0 * params.alpha) - bb);
  double box1 = 0.0;
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    box1 += std::pow(bb, -2.0 * params.alpha * mu(k, b));
  }
  double full = 1.0, box = 1.0;
  for (int j = 1; j <= params.s; ++j) {
    const double g2 = params.gamma(j) * params.gamma(j);
    full *= 1.0 + g2 * full1;
    box *= 1.0 + g2 * box1;
  }
  return full - box;
}

}  // namespace

TEST_CASE("digit count mu") {
  CHECK(mu(0, 2) == 0);
  CHECK(mu(1, 2) == 1);
  CHECK(mu(5, 2) == 3);
  CHECK(mu(9, 3) == 3);
  CHECK(mu(8, 3) == 2);
}

TEST_CASE("r_tilde examples") {
  CHECK(r_tilde(make_params(1.0, {1.0}), 2, std::vector<std::uint64_t>{0}) == 1.0);
  CHECK(r_tilde(make_params(1.0, {1.0}), 2, std::vector<std::uint64_t>{5}) ==
        doctest::Approx(8.0));
  CHECK(r_tilde(make_params(2.0, {0.5}), 2, std::vector<std::uint64_t>{3}) ==
        doctest::Approx(32.0));
  CHECK(std::isinf(r_tilde(make_params(1.0, {0.0}), 2, std::vector<std::uint64_t>{1})));
}

TEST_CASE("r_tilde is multiplicative across coordinates") {
  const SpaceParams p2 = make_params(1.5, {0.9, 0.4});
  for (std::uint64_t k1 = 0; k1 < 16; ++k1) {
    for (std::uint64_t k2 = 0; k2 < 16; ++k2) {
      const double joint = r_tilde(p2, 2, std::vector<std::uint64_t>{k1, k2});
      const double a = r_tilde(make_params(1.5, {0.9}), 2, std::vector<std::uint64_t>{k1});
      const double b = r_tilde(make_params(1.5, {0.4}), 2, std::vector<std::uint64_t>{k2});
      CHECK(joint == doctest::Approx(a * b).epsilon(1e-13));
    }
  }
}

TEST_CASE("walsh function examples") {
  CHECK(walsh_eval(0, std::vector<std::uint8_t>{}, 2) == std::complex<double>(1.0, 0.0));
  CHECK(walsh_eval_real(1, 0.5, 2).real() == doctest::Approx(-1.0));
  CHECK(walsh_eval_real(3, 0.25, 2).real() == doctest::Approx(-1.0));
  CHECK(std::abs(walsh_eval_real(6, 0.625, 2)) == doctest::Approx(1.0));
  // reals too close to a digit boundary are flagged
  CHECK_THROWS_AS(walsh_eval_real(1, 0.49999999999999, 2), std::domain_error);
  CHECK_THROWS(walsh_eval(3, std::vector<std::uint8_t>{1}, 2));  // needs 2 digits
}

TEST_CASE("walsh orthogonality over full digit grids") {
  for (std::uint32_t b : {2u, 3u}) {
    for (int d = 1; d <= (b == 2 ? 4 : 3); ++d) {
      std::uint64_t bd = 1;
      for (int i = 0; i < d; ++i) bd *= b;
      for (std::uint64_t k = 0; k < bd; ++k) {
        for (std::uint64_t kp = 0; kp < bd; ++kp) {
          std::complex<double> sum = 0.0;
          for (std::uint64_t idx = 0; idx < bd; ++idx) {
            // digits of x = idx / b^d, most significant first
            std::vector<std::uint8_t> digits(static_cast<std::size_t>(d));
            std::uint64_t rest = idx;
            for (int i = d - 1; i >= 0; --i) {
              digits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rest % b);
              rest /= b;
            }
            sum += walsh_eval(k, digits, b) * std::conj(walsh_eval(kp, digits, b));
          }
          sum /= static_cast<double>(bd);
          const double expected = k == kp ? 1.0 : 0.0;
          REQUIRE(std::abs(sum - expected) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("sigma weight closed values") {
  // b = 2, alpha = 1: head (b-1)/(b^2-b) = 1/2; the closed form matches
  // the Walsh series (see the series identity test below), giving -1/4 at
  // r = 1 and 1/8 at r = 2.
  CHECK(sigma_weight(1.0, 2, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sigma_weight(1.0, 2, 1) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(sigma_weight(1.0, 2, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(sigma_weight(2.0, 2, 0) == doctest::Approx(1.0 / 14.0).epsilon(1e-15));
  CHECK(sigma_weight(2.0, 2, 1) == doctest::Approx(-1.0 / 16.0).epsilon(1e-14));
  CHECK_THROWS_AS(sigma_weight(0.5, 2, 1), std::domain_error);
}

TEST_CASE("sigma equals its Walsh series at dyadic points") {
  // Evaluate the series at the left-limit digit stream of dyadic x: the
  // terminating expansion with last nonzero digit decremented and all
  // later digits set to 1.
  constexpr int kDigits = 14;  // sums k < 2^14
  RandomSource rng(31);
  for (double alpha : {1.0, 2.0}) {
    const double tail = [&] {
      double t = 0.0;
      for (int a = kDigits + 1; a <= 60; ++a) {
        t += std::pow(2.0, a - 1) * std::pow(2.0, -2.0 * alpha * a);
      }
      return t;
    }();
    // x = 0: all-zero stream
    CHECK(std::abs(sigma_weight(alpha, 2, 0) - sigma_series_base2(alpha, 0, kDigits)) <=
          tail + 1e-12);
    for (int trial = 0; trial < 50; ++trial) {
      const int t = 1 + static_cast<int>(pick_uniform(rng, 10));
      const std::uint64_t j = 1 + pick_uniform(rng, (1ULL << t) - 1);
      // terminating digits of j / 2^t: bit i of mask = digit i+1
      std::uint64_t mask = 0;
      for (int i = 0; i < t; ++i) {
        if ((j >> (t - 1 - i)) & 1) mask |= 1ULL << i;
      }
      // left limit: decrement the last nonzero digit, set the rest to 1
      const int last = 63 - std::countl_zero(mask);
      std::uint64_t left = mask & ~(1ULL << last);
      for (int i = last + 1; i < kDigits; ++i) left |= 1ULL << i;
      const int first_nonzero = left == 0 ? 0 : std::countr_zero(left) + 1;
      const double closed = sigma_weight(alpha, 2, first_nonzero);
      const double series = sigma_series_base2(alpha, left, kDigits);
      REQUIRE(std::abs(closed - series) <= tail + 1e-12);
    }
  }
}

TEST_CASE("walsh criterion: exact dual-sum values") {
  PolyLatticeRule rule{2, 3, GFPoly::from_string("1,1,0,1", 2), {GFPoly::one(2)}};
  // dual = nonzero multiples of p; summing b^{-2 alpha mu} over them gives
  // 1/128 for alpha = 1 and 1/57344 for alpha = 2 (geometric series).
  CHECK(criterion_walsh_kernel(make_params(1.0, {1.0}), rule) ==
        doctest::Approx(1.0 / 128.0).epsilon(1e-13));
  CHECK(criterion_walsh_kernel(make_params(2.0, {1.0}), rule) ==
        doctest::Approx(1.0 / 57344.0).epsilon(1e-13));
  CHECK(criterion_walsh_kernel(make_params(1.0, {0.0}), rule) == doctest::Approx(0.0));
}

TEST_CASE("walsh oracle: smallest dual index is the modulus encoding") {
  const SpaceParams params = make_params(1.0, {1.0});
  PolyLatticeRule rule{2, 3, GFPoly::from_string("1,1,0,1", 2), {GFPoly::one(2)}};
  CHECK(criterion_walsh_oracle(params, rule, 10) == doctest::Approx(0.0));
  // k = 11 encodes x^3 + x + 1 itself: contribution 2^{-2 mu(11)} = 2^-8
  CHECK(criterion_walsh_oracle(params, rule, 11) ==
        doctest::Approx(std::pow(2.0, -8.0)).epsilon(1e-13));
  CHECK_THROWS(criterion_walsh_oracle(make_params(1.0, {1, 1, 1, 1}),
                                      PolyLatticeRule{2, 3, rule.p,
                                                      {GFPoly::one(2), GFPoly::one(2),
                                                       GFPoly::one(2), GFPoly::one(2)}},
                                      100));
}

TEST_CASE("walsh kernel agrees with the truncated dual-sum oracle") {
  RandomSource rng(64);
  const std::uint64_t kmax = 1ULL << 12;
  for (int m : {3, 4}) {
    const auto pool = enumerate_monic_irreducibles(2, m);
    const SpaceParams params = make_params(1.0, {1.0, 0.5});
    const double tail = walsh_box_tail(params, 2, kmax);
    for (int trial = 0; trial < 10; ++trial) {
      const GFPoly& p = pool[pick_uniform(rng, pool.size())];
      const std::uint64_t bm = 1ULL << m;
      PolyLatticeRule rule{2, m, p, {}};
      rule.q.push_back(GFPoly::from_encoding(1 + pick_uniform(rng, bm - 1), 2));
      rule.q.push_back(GFPoly::from_encoding(1 + pick_uniform(rng, bm - 1), 2));
      const double kernel = criterion_walsh_kernel(params, rule);
      const double oracle = criterion_walsh_oracle(params, rule, kmax);
      CHECK(kernel >= 0.0);
      CHECK(std::abs(kernel - oracle) <= tail + 1e-12);
    }
  }
}

TEST_CASE("finite-precision character property") {
  RandomSource rng(5150);
  const GFPoly p = enumerate_monic_irreducibles(2, 4)[0];
  const int d = 4;
  for (int trial = 0; trial < 3; ++trial) {
    PolyLatticeRule rule{2, 4, p, {}};
    rule.q.push_back(GFPoly::from_encoding(1 + pick_uniform(rng, 15), 2));
    rule.q.push_back(GFPoly::from_encoding(1 + pick_uniform(rng, 15), 2));
    // digit matrices of the d-precision points
    std::vector<std::vector<std::uint8_t>> digits(16 * 2);
    for (std::uint64_t n = 0; n < 16; ++n) {
      const GFPoly npoly = GFPoly::from_encoding(n, 2);
      for (int j = 0; j < 2; ++j) {
        digits[n * 2 + static_cast<std::size_t>(j)] =
            laurent_expand(poly_mod_mul(npoly, rule.q[static_cast<std::size_t>(j)], p), p,
                           static_cast<std::size_t>(d));
      }
    }
    for (std::uint64_t k1 = 0; k1 < 16; ++k1) {
      for (std::uint64_t k2 = 0; k2 < 16; ++k2) {
        std::complex<double> sum = 0.0;
        for (std::uint64_t n = 0; n < 16; ++n) {
          sum += walsh_eval(k1, digits[n * 2], 2) * walsh_eval(k2, digits[n * 2 + 1], 2);
        }
        sum /= 16.0;
        // membership: tr_d(k)(x) . q(x) = 0 (mod p); tr_d is the identity
        // here since k < 2^d
        const GFPoly dot = add(poly_mod_mul(GFPoly::from_encoding(k1, 2), rule.q[0], p),
                               poly_mod_mul(GFPoly::from_encoding(k2, 2), rule.q[1], p));
        const bool in_dual = mod(dot, p).is_zero();
        REQUIRE(std::abs(sum - (in_dual ? 1.0 : 0.0)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("infinite-precision walsh values match the truncated points") {
  const GFPoly p = enumerate_monic_irreducibles(2, 4)[1];
  PolyLatticeRule rule{2, 4, p, {GFPoly::one(2), GFPoly::x(2)}};
  const PolyPointSet exact = poly_lattice_points_exact(rule);
  const int d = 4;
  for (std::uint64_t n = 0; n < 16; ++n) {
    for (int j = 0; j < 2; ++j) {
      const auto stream = exact.digits(n, j, static_cast<std::size_t>(d));
      for (std::uint64_t k = 0; k < 16; ++k) {
        const GFPoly v = poly_mod_mul(GFPoly::from_encoding(n, 2),
                                      rule.q[static_cast<std::size_t>(j)], p);
        const auto truncated = laurent_expand(v, p, static_cast<std::size_t>(d));
        REQUIRE(walsh_eval(k, stream, 2) == walsh_eval(k, truncated, 2));
      }
    }
  }
}

TEST_CASE("walsh worst-case error bound examples") {
  const SpaceParams params = make_params(2.0, {1.0});
  CHECK(walsh_wce_bound(params, 2, 8, 0.5, 1.0) == doctest::Approx(1.0 / 255.0).epsilon(1e-13));
  CHECK(walsh_wce_bound(make_params(2.0, {0.0, 0.0}), 2, 8, 0.5, 1.0) == 0.0);
  // scaling in the point count: bound ~ (b^m - 1)^{-lambda}
  const double r = walsh_wce_bound(params, 2, 9, 0.5, 1.0) / walsh_wce_bound(params, 2, 8, 0.5, 1.0);
  CHECK(r == doctest::Approx(255.0 / 511.0).epsilon(1e-12));
  CHECK_THROWS(walsh_wce_bound(params, 2, 8, 0.5, 2.0));
  const auto d = walsh_d_star(params, 2, 8, 0.5, default_lambda_grid(2.0));
  CHECK(d.value <= walsh_wce_bound(params, 2, 8, 0.5, 1.0));
  CHECK(d.assumption_holds);
}
