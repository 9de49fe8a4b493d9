#include "rqmc/korobov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rqmc/numtheory.hpp"

namespace rqmc {

namespace {

// Neumaier-compensated accumulator.
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

}  // namespace

void LatticeRule::validate() const {
  if (N < 2) throw std::invalid_argument("lattice rule requires N >= 2");
  if (z.empty()) throw std::invalid_argument("lattice rule requires s >= 1");
  for (std::uint32_t zj : z) {
    if (zj < 1 || zj >= N) {
      throw std::invalid_argument("generating vector entries must lie in {1,...,N-1}");
    }
  }
}

double r_weight(const SpaceParams& params, std::span<const std::int64_t> k) {
  if (static_cast<int>(k.size()) != params.s) {
    throw std::invalid_argument("frequency vector dimension mismatch");
  }
  double r = 1.0;
  for (int j = 0; j < params.s; ++j) {
    if (k[static_cast<std::size_t>(j)] == 0) continue;
    const double gamma = params.gamma(j + 1);
    const double kj = std::abs(static_cast<double>(k[static_cast<std::size_t>(j)]));
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    r *= std::pow(kj, params.alpha) / gamma;
  }
  return r;
}

std::vector<double> kernel_weight_table(double alpha, std::uint64_t N) {
  std::vector<double> table(N);
  for (std::uint64_t n = 0; n < N; ++n) {
    table[n] = korobov_kernel_weight(alpha, static_cast<double>(n) / static_cast<double>(N));
  }
  return table;
}

double criterion_kernel(const SpaceParams& params, const LatticeRule& rule) {
  params.validate();
  rule.validate();
  if (params.s != rule.s()) {
    throw std::invalid_argument("rule dimension does not match space dimension");
  }
  const std::uint64_t N = rule.N;
  const std::vector<double> w = kernel_weight_table(params.alpha, N);
  std::vector<double> g2(static_cast<std::size_t>(params.s));
  for (int j = 0; j < params.s; ++j) {
    const double g = params.gamma(j + 1);
    g2[static_cast<std::size_t>(j)] = g * g;
  }
  CompensatedSum acc;
  for (std::uint64_t n = 0; n < N; ++n) {
    double prod = 1.0;
    for (int j = 0; j < params.s; ++j) {
      const std::uint64_t idx = (n * rule.z[static_cast<std::size_t>(j)]) % N;
      prod *= 1.0 + g2[static_cast<std::size_t>(j)] * w[idx];
    }
    acc.add(prod);
  }
  return acc.value() / static_cast<double>(N) - 1.0;
}

double criterion_oracle(const SpaceParams& params, const LatticeRule& rule, std::uint64_t kmax) {
  params.validate();
  rule.validate();
  if (params.s != rule.s()) {
    throw std::invalid_argument("rule dimension does not match space dimension");
  }
  if (params.s > 3) {
    throw std::invalid_argument("criterion_oracle refuses s > 3 (cost guard)");
  }
  if (kmax < rule.N) {
    throw std::invalid_argument("criterion_oracle requires kmax >= N");
  }
  const auto N = static_cast<std::int64_t>(rule.N);
  const auto K = static_cast<std::int64_t>(kmax);
  CompensatedSum acc;
  std::vector<std::int64_t> k(static_cast<std::size_t>(params.s), 0);

  // Depth-first sweep of the box [-kmax, kmax]^s excluding the origin.
  auto visit = [&](auto&& self, int dim, std::int64_t dot) -> void {
    if (dim == params.s) {
      bool zero = true;
      for (std::int64_t kj : k) zero = zero && kj == 0;
      if (zero) return;
      if (dot % N == 0) {
        const double r = r_weight(params, k);
        if (std::isfinite(r)) acc.add(1.0 / (r * r));
      }
      return;
    }
    for (std::int64_t kj = -K; kj <= K; ++kj) {
      k[static_cast<std::size_t>(dim)] = kj;
      const std::int64_t zj = static_cast<std::int64_t>(rule.z[static_cast<std::size_t>(dim)]);
      const std::int64_t contrib = ((kj % N) * zj) % N;
      self(self, dim + 1, (dot + contrib) % N);
    }
  };
  visit(visit, 0, 0);
  return acc.value();
}

namespace {

void check_bound_args(const SpaceParams& params, double tau, double lambda) {
  params.validate();
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("tau must lie in (0,1)");
  }
  if (!(lambda >= 0.5 && lambda < params.alpha)) {
    throw std::invalid_argument("lambda must lie in [1/2, alpha)");
  }
}

// prod_j (1 + gamma_j^{1/lambda} c) - 1, the weighted sum over all
// non-empty coordinate subsets of gamma_u^{1/lambda} c^{|u|}.
double weighted_subset_sum(const SpaceParams& params, double lambda, double c) {
  double prod = 1.0;
  for (int j = 1; j <= params.s; ++j) {
    const double g = params.gamma(j);
    prod *= 1.0 + (g > 0.0 ? std::pow(g, 1.0 / lambda) * c : 0.0);
  }
  return prod - 1.0;
}

}  // namespace

double wce_bound(const SpaceParams& params, std::uint64_t M, double tau, double lambda) {
  check_bound_args(params, tau, lambda);
  if (M < 2) throw std::invalid_argument("M must be >= 2");
  const double c = 2.0 * riemann_zeta(params.alpha / lambda);
  const double subset_sum = weighted_subset_sum(params, lambda, c);
  return std::pow(2.0 * subset_sum / ((1.0 - tau) * static_cast<double>(M)), lambda);
}

DStarResult d_star(const SpaceParams& params, std::uint64_t M, double tau,
                   std::span<const double> lambda_grid) {
  if (lambda_grid.empty()) {
    throw std::invalid_argument("d_star requires a non-empty lambda grid");
  }
  DStarResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    const double b = wce_bound(params, M, tau, lambda);
    if (b < best.value) {
      best.value = b;
      best.argmin_lambda = lambda;
    }
  }
  best.assumption_holds = best.value <= 1.0;
  return best;
}

std::vector<double> default_lambda_grid(double alpha) {
  if (!(alpha > 0.5)) throw std::invalid_argument("alpha must exceed 1/2");
  const double lo = 0.5;
  const double hi = std::max(lo, alpha - 0.01);
  std::vector<double> grid;
  if (hi == lo) {
    grid.push_back(lo);
    return grid;
  }
  constexpr int kPoints = 41;
  grid.reserve(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1));
  }
  return grid;
}

}  // namespace rqmc
