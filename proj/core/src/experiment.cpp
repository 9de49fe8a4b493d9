#include "rqmc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rqmc/cbc.hpp"
#include "rqmc/numtheory.hpp"
#include "rqmc/pointset.hpp"
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

}  // namespace

Method method_from_name(const std::string& name) {
  if (name == "mc") return Method::Mc;
  if (name == "rand-lattice-shift-tent") return Method::RandLatticeShiftTent;
  if (name == "rand-lattice-shift") return Method::RandLatticeShift;
  if (name == "rand-polylattice-digital-shift") return Method::RandPolyDigitalShift;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method method) {
  switch (method) {
    case Method::Mc:
      return "mc";
    case Method::RandLatticeShiftTent:
      return "rand-lattice-shift-tent";
    case Method::RandLatticeShift:
      return "rand-lattice-shift";
    case Method::RandPolyDigitalShift:
      return "rand-polylattice-digital-shift";
  }
  return {};
}

double f1(std::span<const double> x) {
  double prod = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = x[j];
    const double b2 = t * t - t + 1.0 / 6.0;
    const double jj = static_cast<double>(j + 1);
    prod *= 1.0 + b2 / (jj * jj);
  }
  return prod - 1.0;
}

double f2(std::span<const double> x) {
  double prod = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = x[j];
    const double t2 = t * t;
    const double b4 = t2 * t2 - 2.0 * t2 * t + t2 - 1.0 / 30.0;
    const double jj = static_cast<double>(j + 1);
    prod *= 1.0 + b4 / (jj * jj * jj * jj);
  }
  return prod - 1.0;
}

double f3(std::span<const double> x) {
  double prod = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double jj = static_cast<double>(j + 1);
    prod *= 1.0 + (std::abs(4.0 * x[j] - 2.0) - 1.0) / (jj * jj);
  }
  return prod - 1.0;
}

std::function<double(std::span<const double>)> make_integrand(const std::string& name,
                                                              double alpha,
                                                              const Weights& weights) {
  if (name == "f1") return [](std::span<const double> x) { return f1(x); };
  if (name == "f2") return [](std::span<const double> x) { return f2(x); };
  if (name == "f3") return [](std::span<const double> x) { return f3(x); };
  if (name == "const1") return [](std::span<const double>) { return 1.0; };
  if (name.rfind("gfreq:", 0) == 0) {
    const double freq = std::stod(name.substr(6));
    const double gamma1 = weights.gamma(1);
    if (!(gamma1 > 0.0)) throw std::invalid_argument("gfreq requires gamma_1 > 0");
    const double r = std::pow(freq, alpha) / gamma1;
    return [freq, r](std::span<const double> x) {
      return std::numbers::sqrt2 * std::cos(2.0 * std::numbers::pi * freq * x[0]) / r;
    };
  }
  throw std::invalid_argument("unknown integrand: " + name);
}

double mc_estimate(const std::function<double(std::span<const double>)>& f, int s,
                   std::uint64_t n, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("mc_estimate requires n >= 1");
  std::vector<double> x(static_cast<std::size_t>(s));
  CompensatedSum acc;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (auto& c : x) c = rng.next_double01();
    acc.add(f(x));
  }
  return acc.value() / static_cast<double>(n);
}

std::pair<double, std::uint64_t> randomized_lattice_estimate(
    const std::function<double(std::span<const double>)>& f, const SpaceParams& params,
    std::uint64_t M, double tau, RandomSource& rng, bool tent_transform) {
  auto [rule, trace] = construct_lattice(params, M, tau, rng);
  PointSet ps = random_shift(lattice_points(rule), rng);
  if (tent_transform) ps = tent(ps);
  return {integrate(f, ps), rule.N};
}

std::pair<double, std::uint64_t> randomized_poly_estimate(
    const std::function<double(std::span<const double>)>& f, const SpaceParams& params,
    std::uint32_t b, int m, double tau, RandomSource& rng) {
  auto [rule, trace] = construct_poly_lattice(params, b, m, tau, rng);
  const PolyPointSet exact = poly_lattice_points_exact(rule);
  const int d_shift = std::max(default_digital_shift_digits(b), m);
  const PointSet ps = digital_shift(exact, rng, d_shift);
  return {integrate(f, ps), rule.n_points()};
}

double sample_variance(std::span<const double> estimates) {
  const std::size_t R = estimates.size();
  if (R < 2) throw std::invalid_argument("sample variance needs at least two replications");
  CompensatedSum mean_acc;
  for (double v : estimates) mean_acc.add(v);
  const double mean = mean_acc.value() / static_cast<double>(R);
  CompensatedSum var_acc;
  for (double v : estimates) var_acc.add((v - mean) * (v - mean));
  return var_acc.value() / static_cast<double>(R - 1);
}

double fit_rate(std::span<const double> sizes, std::span<const double> variances) {
  if (sizes.size() != variances.size()) {
    throw std::invalid_argument("fit_rate needs matching grids");
  }
  if (sizes.size() < 4) {
    throw std::invalid_argument("fit_rate needs at least 4 grid points");
  }
  const std::size_t n = sizes.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(variances[i] > 0.0)) {
      throw std::invalid_argument("fit_rate needs positive variances");
    }
    lx[i] = std::log(sizes[i]);
    ly[i] = std::log(variances[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

void ExperimentConfig::validate() const {
  SpaceParams params{alpha, weights, s};
  params.validate();
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");
  if (replications < 2) throw std::invalid_argument("need at least 2 replications");
  if (sizes.empty()) throw std::invalid_argument("size schedule is empty");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw std::invalid_argument("size schedule must be strictly increasing");
    }
  }
  if (method == Method::RandPolyDigitalShift) {
    for (std::uint64_t size : sizes) {
      std::uint64_t v = size;
      while (v > 1 && v % base == 0) v /= base;
      if (v != 1) {
        throw std::invalid_argument("polynomial lattice sizes must be powers of the base");
      }
    }
  }
}

namespace {

int log_base(std::uint64_t size, std::uint32_t b) {
  int m = 0;
  std::uint64_t v = 1;
  while (v < size) {
    v *= b;
    ++m;
  }
  return m;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;

  const SpaceParams params{config.alpha, config.weights, config.s};
  const auto f = make_integrand(config.integrand, config.alpha, config.weights);
  const std::size_t n_sizes = config.sizes.size();
  const auto reps = static_cast<std::size_t>(config.replications);

  result.records.resize(n_sizes * reps);
  parallel_for(n_sizes * reps, config.threads, [&](std::size_t job) {
    const std::size_t si = job / reps;
    const std::size_t rep = job % reps;
    const std::uint64_t size = config.sizes[si];
    RandomSource rng(derive_seed(config.master_seed, si, rep));

    ExperimentRecord rec;
    rec.size = size;
    rec.rep = static_cast<int>(rep);
    switch (config.method) {
      case Method::Mc: {
        rec.estimate = mc_estimate(f, config.s, size, rng);
        rec.n_points = size;
        break;
      }
      case Method::RandLatticeShiftTent:
      case Method::RandLatticeShift: {
        const bool tent_transform = config.method == Method::RandLatticeShiftTent;
        auto [estimate, n_used] =
            randomized_lattice_estimate(f, params, size, config.tau, rng, tent_transform);
        rec.estimate = estimate;
        rec.n_points = n_used;
        break;
      }
      case Method::RandPolyDigitalShift: {
        const int m = log_base(size, config.base);
        auto [estimate, n_used] =
            randomized_poly_estimate(f, params, config.base, m, config.tau, rng);
        rec.estimate = estimate;
        rec.n_points = n_used;
        break;
      }
    }
    result.records[job] = rec;
  });

  result.summary.resize(n_sizes);
  std::vector<double> variances(n_sizes);
  for (std::size_t si = 0; si < n_sizes; ++si) {
    std::vector<double> estimates(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
      estimates[rep] = result.records[si * reps + rep].estimate;
    }
    variances[si] = sample_variance(estimates);
    result.summary[si] = {config.sizes[si], variances[si], config.replications};
  }

  if (n_sizes >= 4) {
    std::vector<double> sizes_d(n_sizes);
    for (std::size_t i = 0; i < n_sizes; ++i) sizes_d[i] = static_cast<double>(config.sizes[i]);
    result.slope = fit_rate(sizes_d, variances);
  } else {
    result.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

std::string ExperimentResult::records_csv() const {
  std::string out = "method,size,rep,n_points,estimate\n";
  const std::string name = method_name(config.method);
  char line[160];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%s,%llu,%d,%llu,%.17g\n", name.c_str(),
                  static_cast<unsigned long long>(r.size), r.rep,
                  static_cast<unsigned long long>(r.n_points), r.estimate);
    out += line;
  }
  return out;
}

std::string ExperimentResult::summary_csv() const {
  std::string out = "method,size,variance,R\n";
  const std::string name = method_name(config.method);
  char line[128];
  for (const auto& s : summary) {
    std::snprintf(line, sizeof line, "%s,%llu,%.17g,%d\n", name.c_str(),
                  static_cast<unsigned long long>(s.size), s.variance, s.replications);
    out += line;
  }
  return out;
}

std::string ExperimentResult::loglog_dat() const {
  std::string out = "# log2(size) log2(variance)\n";
  char line[80];
  for (const auto& s : summary) {
    std::snprintf(line, sizeof line, "%.17g %.17g\n", std::log2(static_cast<double>(s.size)),
                  std::log2(s.variance));
    out += line;
  }
  return out;
}

}  // namespace rqmc
