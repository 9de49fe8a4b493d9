// Command line front end: construct rules, evaluate bound certificates,
// dump point sets, integrate, and run the variance-decay experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rqmc/cbc.hpp"
#include "rqmc/experiment.hpp"
#include "rqmc/korobov.hpp"
#include "rqmc/numtheory.hpp"
#include "rqmc/pointset.hpp"
#include "rqmc/rule_io.hpp"
#include "rqmc/threading.hpp"
#include "rqmc/walsh.hpp"

namespace {

using namespace rqmc;

std::vector<double> parse_lambda_grid(const std::string& spec, double alpha) {
  if (spec.empty()) return default_lambda_grid(alpha);
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    // start:step:end
    double start = 0, step = 0, end = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &end) != 3 || step <= 0) {
      throw CLI::ValidationError("--lambda-grid", "expected start:step:end or a comma list");
    }
    for (double v = start; v <= end + 1e-12; v += step) grid.push_back(v);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
  }
  if (grid.empty()) throw CLI::ValidationError("--lambda-grid", "grid is empty");
  return grid;
}

std::vector<std::uint64_t> parse_sizes(const std::string& spec) {
  std::vector<std::uint64_t> sizes;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    // a..bxc : geometric schedule from a to b with factor c
    const auto xpos = spec.find('x', dots);
    if (xpos == std::string::npos) {
      throw CLI::ValidationError("--sizes", "expected a..bxc or a comma list");
    }
    const std::uint64_t a = std::stoull(spec.substr(0, dots));
    const std::uint64_t b = std::stoull(spec.substr(dots + 2, xpos - dots - 2));
    const std::uint64_t c = std::stoull(spec.substr(xpos + 1));
    if (a < 1 || c < 2 || b < a) throw CLI::ValidationError("--sizes", "bad schedule");
    for (std::uint64_t v = a; v <= b; v *= c) sizes.push_back(v);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(std::stoull(item));
  }
  if (sizes.empty()) throw CLI::ValidationError("--sizes", "schedule is empty");
  return sizes;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

void print_trace(const CbcTrace& trace) {
  std::fprintf(stderr, "modulus %llu\n", static_cast<unsigned long long>(trace.modulus));
  for (const auto& d : trace.dims) {
    std::fprintf(stderr, "dim %d: |Z|=%zu chosen=%llu criterion=%.17g\n", d.dim,
                 d.candidate_count, static_cast<unsigned long long>(d.chosen), d.criterion);
  }
}

struct SpaceFlags {
  int s = 1;
  double alpha = 2.0;
  std::string weights = "poly:2";
  double tau = 0.5;

  SpaceParams params() const { return {alpha, Weights::parse(weights), s}; }
};

void add_space_flags(CLI::App* cmd, SpaceFlags& f) {
  cmd->add_option("--s", f.s, "dimension");
  cmd->add_option("--alpha", f.alpha, "smoothness parameter (> 1/2)");
  cmd->add_option("--weights", f.weights, "weights: poly:p | const:c | list:a,b,...");
  cmd->add_option("--tau", f.tau, "fraction of best candidates kept, in (0,1)");
}

int cmd_construct(const std::string& kind, const SpaceFlags& flags, std::uint64_t M,
                  std::uint32_t b, int m, std::uint64_t seed, int threads,
                  const std::string& out_path) {
  const SpaceParams params = flags.params();
  RandomSource rng(seed);
  RuleMeta meta{seed, flags.tau, flags.alpha, Weights::parse(flags.weights).format()};
  std::string text;
  if (kind == "lattice") {
    auto [rule, trace] = construct_lattice(params, M, flags.tau, rng, threads);
    print_trace(trace);
    text = lattice_rule_json(rule, meta);
  } else if (kind == "polylattice") {
    auto [rule, trace] = construct_poly_lattice(params, b, m, flags.tau, rng, threads);
    print_trace(trace);
    text = poly_rule_json(rule, meta);
  } else {
    std::fprintf(stderr, "error: --kind must be lattice or polylattice\n");
    return 2;
  }
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text(out_path, text);
  }
  return 0;
}

int cmd_bound(const std::string& kind, const SpaceFlags& flags, std::uint64_t M, std::uint32_t b,
              int m, const std::string& grid_spec) {
  const SpaceParams params = flags.params();
  const auto grid = parse_lambda_grid(grid_spec, flags.alpha);
  if (kind == "lattice") {
    for (double lambda : grid) {
      std::printf("lambda=%.10g bound=%.17g\n", lambda, wce_bound(params, M, flags.tau, lambda));
    }
    const auto d = d_star(params, M, flags.tau, grid);
    std::printf("min bound=%.17g at lambda=%.10g\n", d.value, d.argmin_lambda);
    std::printf("size assumption (min bound <= 1): %s\n",
                d.assumption_holds ? "satisfied" : "violated");
  } else if (kind == "polylattice") {
    for (double lambda : grid) {
      std::printf("lambda=%.10g bound=%.17g\n", lambda,
                  walsh_wce_bound(params, b, m, flags.tau, lambda));
    }
    const auto d = walsh_d_star(params, b, m, flags.tau, grid);
    std::printf("min bound=%.17g at lambda=%.10g\n", d.value, d.argmin_lambda);
    std::printf("size assumption (min bound <= 1): %s\n",
                d.assumption_holds ? "satisfied" : "violated");
  } else {
    std::fprintf(stderr, "error: --kind must be lattice or polylattice\n");
    return 2;
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read rule file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shared randomization pipeline for points/integrate: optional shift and
// tent for lattice rules, optional digital shift for polynomial rules.
PointSet materialize_points(const ParsedRule& parsed, bool do_shift, bool do_tent,
                            bool do_digital_shift, int d, int d_shift, std::uint64_t seed) {
  RandomSource rng(seed);
  if (parsed.lattice) {
    PointSet ps = lattice_points(*parsed.lattice);
    if (do_shift) ps = random_shift(ps, rng);
    if (do_tent) ps = tent(ps);
    return ps;
  }
  const PolyLatticeRule& rule = *parsed.poly;
  if (do_digital_shift) {
    const PolyPointSet exact = poly_lattice_points_exact(rule);
    const int digits = d_shift > 0 ? d_shift : std::max(default_digital_shift_digits(rule.b),
                                                        rule.m);
    return digital_shift(exact, rng, digits);
  }
  return poly_lattice_points(rule, d);
}

int cmd_points(const std::string& rule_path, bool do_shift, bool do_tent, bool do_digital_shift,
               bool exact_mode, int d, int d_shift, std::uint64_t seed,
               const std::string& out_path) {
  const ParsedRule parsed = parse_rule_json(read_file(rule_path));
  std::string text;
  char buf[64];
  if (exact_mode) {
    if (!parsed.poly) {
      std::fprintf(stderr, "error: --exact applies to polynomial lattice rules only\n");
      return 2;
    }
    const PolyPointSet exact = poly_lattice_points_exact(*parsed.poly);
    // One period of expansion digits per coordinate, bracketed.
    for (std::size_t i = 0; i < exact.rule.n_points(); ++i) {
      for (int j = 0; j < exact.rule.s(); ++j) {
        if (j) text += ' ';
        const auto digits = exact.digits(i, j, exact.period);
        text += "0.[";
        for (std::uint8_t u : digits) text += static_cast<char>('0' + u);
        text += ']';
      }
      text += '\n';
    }
  } else {
    const PointSet ps =
        materialize_points(parsed, do_shift, do_tent, do_digital_shift, d, d_shift, seed);
    for (std::size_t i = 0; i < ps.n; ++i) {
      for (int j = 0; j < ps.s; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", ps(i, j));
        if (j) text += ' ';
        text += buf;
      }
      text += '\n';
    }
  }
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text(out_path, text);
  }
  return 0;
}

int cmd_integrate(const std::string& rule_path, const std::string& integrand, bool do_shift,
                  bool do_tent, bool do_digital_shift, int d, int d_shift, std::uint64_t seed) {
  const ParsedRule parsed = parse_rule_json(read_file(rule_path));
  const Weights weights = Weights::parse(parsed.meta.weights);
  const auto f = make_integrand(integrand, parsed.meta.alpha, weights);
  const PointSet ps =
      materialize_points(parsed, do_shift, do_tent, do_digital_shift, d, d_shift, seed);
  std::printf("%.17g\n", integrate(f, ps));
  return 0;
}

int cmd_experiment(const std::string& method, const std::string& integrand, SpaceFlags flags,
                   bool alpha_given, bool weights_given, const std::string& sizes_spec, int R,
                   std::uint64_t seed, std::uint32_t base, int threads,
                   const std::string& out_prefix) {
  ExperimentConfig config;
  config.method = method_from_name(method);
  config.integrand = integrand;
  // Matching space defaults: f2 pairs with alpha=4 and gamma_j = j^-4,
  // the other test functions with alpha=2 and gamma_j = j^-2.
  if (!alpha_given) flags.alpha = integrand == "f2" ? 4.0 : 2.0;
  if (!weights_given) flags.weights = integrand == "f2" ? "poly:4" : "poly:2";
  config.s = flags.s;
  config.alpha = flags.alpha;
  config.weights = Weights::parse(flags.weights);
  config.tau = flags.tau;
  config.sizes = parse_sizes(sizes_spec);
  if (config.sizes.size() < 4) {
    std::fprintf(stderr, "error: schedule too short for a slope fit (need >= 4 sizes)\n");
    return 2;
  }
  config.replications = R;
  config.master_seed = seed;
  config.base = base;
  config.threads = resolve_threads(threads);

  const ExperimentResult result = run_experiment(config);
  write_text(out_prefix + ".csv", result.records_csv());
  write_text(out_prefix + "_summary.csv", result.summary_csv());
  write_text(out_prefix + "_loglog.dat", result.loglog_dat());
  std::fputs(result.summary_csv().c_str(), stdout);
  std::printf("slope %.6g\n", result.slope);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized rank-1 lattice and polynomial lattice rules"};
  app.require_subcommand(1);

  int threads = 0;  // 0: RQMC_THREADS or hardware concurrency

  // construct
  auto* construct = app.add_subcommand("construct", "run the randomized CBC construction");
  std::string kind = "lattice";
  SpaceFlags cflags;
  std::uint64_t M = 127;
  std::uint32_t base = 2;
  int m = 8;
  std::uint64_t seed = 0;
  std::string out_path;
  construct->add_option("--kind", kind, "lattice | polylattice");
  construct->add_option("--M", M, "size parameter, modulus drawn from primes in (M/2, M]");
  construct->add_option("--b", base, "polynomial lattice base (prime)");
  construct->add_option("--m", m, "polynomial modulus degree");
  add_space_flags(construct, cflags);
  construct->add_option("--seed", seed, "random seed");
  construct->add_option("--threads", threads, "worker threads (0 = auto)");
  construct->add_option("--out", out_path, "write rule JSON here instead of stdout");

  // bound
  auto* bound = app.add_subcommand("bound", "evaluate worst-case error bound certificates");
  std::string bkind = "lattice";
  SpaceFlags bflags;
  std::uint64_t bM = 127;
  std::uint32_t bbase = 2;
  int bm = 8;
  std::string grid_spec;
  bound->add_option("--kind", bkind, "lattice | polylattice");
  bound->add_option("--M", bM, "lattice size parameter");
  bound->add_option("--b", bbase, "polynomial lattice base");
  bound->add_option("--m", bm, "polynomial modulus degree");
  add_space_flags(bound, bflags);
  bound->add_option("--lambda-grid", grid_spec, "start:step:end or comma list");

  // points
  auto* points = app.add_subcommand("points", "dump quadrature nodes");
  std::string rule_path;
  bool do_shift = false, do_tent = false, do_digital = false, exact_mode = false;
  int d = 32, d_shift = 0;
  std::uint64_t pseed = 0;
  points->add_option("--rule", rule_path, "rule JSON file")->required();
  points->add_flag("--shift", do_shift, "apply one uniform random shift");
  points->add_flag("--tent", do_tent, "apply the tent transform");
  points->add_flag("--digital-shift", do_digital, "apply one random digital shift");
  points->add_flag("--exact", exact_mode, "print digit strings (polynomial rules)");
  points->add_option("--d", d, "finite precision for polynomial lattice points");
  points->add_option("--d-shift", d_shift, "digital shift digit count (0 = default)");
  points->add_option("--seed", pseed, "random seed for the randomizations");
  points->add_option("--out", out_path, "output file (default stdout)");

  // integrate
  auto* integrate_cmd = app.add_subcommand("integrate", "QMC estimate of an integrand");
  std::string irule, integrand = "f1";
  bool ishift = false, itent = false, idigital = false;
  int id = 32, id_shift = 0;
  std::uint64_t iseed = 0;
  integrate_cmd->add_option("--rule", irule, "rule JSON file")->required();
  integrate_cmd->add_option("--f", integrand, "f1 | f2 | f3 | const1 | gfreq:K");
  integrate_cmd->add_flag("--shift", ishift, "apply one uniform random shift");
  integrate_cmd->add_flag("--tent", itent, "apply the tent transform");
  integrate_cmd->add_flag("--digital-shift", idigital, "apply one random digital shift");
  integrate_cmd->add_option("--d", id, "finite precision for polynomial lattice points");
  integrate_cmd->add_option("--d-shift", id_shift, "digital shift digit count (0 = default)");
  integrate_cmd->add_option("--seed", iseed, "random seed for the randomizations");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "variance decay study");
  std::string method = "mc", ef = "f1", sizes_spec, out_prefix = "experiment";
  SpaceFlags eflags;
  eflags.s = 20;
  int R = 100;
  std::uint64_t eseed = 0;
  std::uint32_t ebase = 2;
  experiment->add_option("--method", method,
                         "mc | rand-lattice-shift-tent | rand-lattice-shift | "
                         "rand-polylattice-digital-shift");
  experiment->add_option("--f", ef, "integrand: f1 | f2 | f3");
  auto* alpha_opt = experiment->add_option("--alpha", eflags.alpha, "smoothness (> 1/2)");
  auto* weights_opt = experiment->add_option("--weights", eflags.weights, "weight spec");
  experiment->add_option("--s", eflags.s, "dimension");
  experiment->add_option("--tau", eflags.tau, "candidate fraction in (0,1)");
  experiment->add_option("--sizes", sizes_spec, "a..bxc or comma list")->required();
  experiment->add_option("--R", R, "replications");
  experiment->add_option("--seed", eseed, "master seed");
  experiment->add_option("--b", ebase, "polynomial lattice base");
  experiment->add_option("--threads", threads, "worker threads (0 = auto)");
  experiment->add_option("--out-prefix", out_prefix, "output file prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) {
      return cmd_construct(kind, cflags, M, base, m, seed, resolve_threads(threads), out_path);
    }
    if (bound->parsed()) {
      return cmd_bound(bkind, bflags, bM, bbase, bm, grid_spec);
    }
    if (points->parsed()) {
      return cmd_points(rule_path, do_shift, do_tent, do_digital, exact_mode, d, d_shift, pseed,
                        out_path);
    }
    if (integrate_cmd->parsed()) {
      return cmd_integrate(irule, integrand, ishift, itent, idigital, id, id_shift, iseed);
    }
    if (experiment->parsed()) {
      return cmd_experiment(method, ef, eflags, alpha_opt->count() > 0, weights_opt->count() > 0,
                            sizes_spec, R, eseed, ebase, threads, out_prefix);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
