#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rqmc/params.hpp"
#include "rqmc/random.hpp"

namespace rqmc {

enum class Method { Mc, RandLatticeShiftTent, RandLatticeShift, RandPolyDigitalShift };

Method method_from_name(const std::string& name);
std::string method_name(Method method);

/// Product test integrands over [0,1]^s, each with integral exactly 0:
///   f1: prod_j [1 + B_2(x_j)/j^2] - 1
///   f2: prod_j [1 + B_4(x_j)/j^4] - 1
///   f3: prod_j [1 + (|4 x_j - 2| - 1)/j^2] - 1
double f1(std::span<const double> x);
double f2(std::span<const double> x);
double f3(std::span<const double> x);

/// Integrand factory for "f1", "f2", "f3", "const1" and "gfreq:K" (the
/// single-frequency function sqrt(2) cos(2 pi K x_1) / (K^alpha / gamma_1)).
std::function<double(std::span<const double>)> make_integrand(const std::string& name,
                                                              double alpha,
                                                              const Weights& weights);

/// Plain Monte Carlo estimate: average of f at n i.i.d. uniform points.
double mc_estimate(const std::function<double(std::span<const double>)>& f, int s,
                   std::uint64_t n, RandomSource& rng);

/// One replication of the randomized lattice estimator: run the randomized
/// CBC construction for size parameter M, apply one uniform shift, then
/// optionally the tent transform, and average f. Returns the estimate and
/// the number of points actually used (the random prime N).
std::pair<double, std::uint64_t> randomized_lattice_estimate(
    const std::function<double(std::span<const double>)>& f, const SpaceParams& params,
    std::uint64_t M, double tau, RandomSource& rng, bool tent_transform);

/// One replication of the randomized polynomial lattice estimator with a
/// random digital shift over the infinite-precision points.
std::pair<double, std::uint64_t> randomized_poly_estimate(
    const std::function<double(std::span<const double>)>& f, const SpaceParams& params,
    std::uint32_t b, int m, double tau, RandomSource& rng);

/// Unbiased sample variance (1/(R-1)) sum (v_r - mean)^2; needs R >= 2.
double sample_variance(std::span<const double> estimates);

/// Least-squares slope of log(variance) against log(size). Requires at
/// least 4 grid points and positive variances.
double fit_rate(std::span<const double> sizes, std::span<const double> variances);

struct ExperimentConfig {
  Method method = Method::Mc;
  std::string integrand = "f1";
  int s = 20;
  double alpha = 2.0;
  Weights weights = Weights::poly(2.0);
  double tau = 0.5;
  std::vector<std::uint64_t> sizes;  // M values, n values, or b^m values
  int replications = 100;
  std::uint64_t master_seed = 0;
  std::uint32_t base = 2;  // polynomial lattice base
  int threads = 1;

  void validate() const;
};

struct ExperimentRecord {
  std::uint64_t size = 0;
  int rep = 0;
  std::uint64_t n_points = 0;
  double estimate = 0.0;
};

struct ExperimentSummary {
  std::uint64_t size = 0;
  double variance = 0.0;
  int replications = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ExperimentRecord> records;    // ordered by (size, rep)
  std::vector<ExperimentSummary> summary;   // ordered by size
  double slope = 0.0;                       // NaN when fewer than 4 sizes

  std::string records_csv() const;  // method,size,rep,n_points,estimate
  std::string summary_csv() const;  // method,size,variance,R
  std::string loglog_dat() const;   // gnuplot-ready log2/log2 columns
};

/// Runs every (size, replication) job, each seeded independently from the
/// master seed, so results are byte-identical for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace rqmc
