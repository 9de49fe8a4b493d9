#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "rqmc/cbc.hpp"
#include "rqmc/experiment.hpp"
#include "rqmc/numtheory.hpp"
#include "rqmc/pointset.hpp"
#include "rqmc/rule_io.hpp"

using namespace rqmc;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rqmc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kCli = RQMC_CLI_PATH;

}  // namespace

TEST_CASE("construct emits schema-conforming rule JSON") {
  TempDir tmp;
  const fs::path rule_path = tmp.path / "rule.json";
  const std::string cmd = kCli +
                          " construct --kind lattice --M 127 --s 5 --alpha 2"
                          " --weights poly:2 --tau 0.5 --seed 42 --out " +
                          rule_path.string() + " 2>/dev/null";
  REQUIRE(run(cmd) == 0);
  const ParsedRule parsed = parse_rule_json(slurp(rule_path));
  REQUIRE(parsed.lattice.has_value());
  const auto pool = primes_in_half_open_range(127).primes;
  CHECK(std::find(pool.begin(), pool.end(), parsed.lattice->N) != pool.end());
  CHECK(parsed.lattice->s() == 5);
  CHECK(parsed.lattice->z[0] == 1);
  CHECK(parsed.meta.seed == 42);
  CHECK(parsed.meta.weights == "poly:2");
}

TEST_CASE("bad tau and s = 1 behavior") {
  TempDir tmp;
  CHECK(run(kCli + " construct --kind lattice --M 20 --s 2 --tau 1.0 2>/dev/null >/dev/null") !=
        0);
  const fs::path rule_path = tmp.path / "one.json";
  REQUIRE(run(kCli + " construct --kind lattice --M 127 --s 1 --seed 9 --out " +
              rule_path.string() + " 2>/dev/null") == 0);
  const ParsedRule parsed = parse_rule_json(slurp(rule_path));
  CHECK(parsed.lattice->z == std::vector<std::uint32_t>{1});
}

TEST_CASE("round trip: construct, points, integrate match the in-process pipeline") {
  TempDir tmp;
  const fs::path rule_path = tmp.path / "rule.json";
  const fs::path pts_path = tmp.path / "pts.txt";
  const fs::path est_path = tmp.path / "est.txt";
  REQUIRE(run(kCli +
              " construct --kind lattice --M 63 --s 3 --alpha 2 --weights poly:2"
              " --tau 0.5 --seed 42 --out " +
              rule_path.string() + " 2>/dev/null") == 0);
  REQUIRE(run(kCli + " points --rule " + rule_path.string() +
              " --shift --tent --seed 7 --out " + pts_path.string() + " 2>/dev/null") == 0);
  REQUIRE(run(kCli + " integrate --rule " + rule_path.string() +
              " --f f1 --shift --tent --seed 7 > " + est_path.string() + " 2>/dev/null") == 0);

  // same pipeline in process
  SpaceParams params{2.0, Weights::poly(2.0), 3};
  RandomSource construct_rng(42);
  const auto [rule, trace] = construct_lattice(params, 63, 0.5, construct_rng);
  RandomSource shift_rng(7);
  const PointSet ps = tent(random_shift(lattice_points(rule), shift_rng));

  std::string expected_pts;
  char buf[64];
  for (std::size_t i = 0; i < ps.n; ++i) {
    for (int j = 0; j < ps.s; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ps(i, j));
      if (j) expected_pts += ' ';
      expected_pts += buf;
    }
    expected_pts += '\n';
  }
  CHECK(slurp(pts_path) == expected_pts);

  const double estimate = integrate(make_integrand("f1", 2.0, Weights::poly(2.0)), ps);
  std::snprintf(buf, sizeof buf, "%.17g\n", estimate);
  CHECK(slurp(est_path) == std::string(buf));
}

TEST_CASE("integrate const1 returns exactly 1") {
  TempDir tmp;
  const fs::path rule_path = tmp.path / "rule.json";
  const fs::path est_path = tmp.path / "est.txt";
  REQUIRE(run(kCli + " construct --kind lattice --M 31 --s 2 --seed 1 --out " +
              rule_path.string() + " 2>/dev/null") == 0);
  REQUIRE(run(kCli + " integrate --rule " + rule_path.string() + " --f const1 > " +
              est_path.string() + " 2>/dev/null") == 0);
  CHECK(slurp(est_path) == "1\n");
}

TEST_CASE("polylattice construct, exact points, digital shift") {
  TempDir tmp;
  const fs::path rule_path = tmp.path / "poly.json";
  const fs::path pts_path = tmp.path / "pts.txt";
  REQUIRE(run(kCli +
              " construct --kind polylattice --b 2 --m 3 --s 2 --alpha 2"
              " --weights poly:2 --tau 0.5 --seed 5 --out " +
              rule_path.string() + " 2>/dev/null") == 0);
  const ParsedRule parsed = parse_rule_json(slurp(rule_path));
  REQUIRE(parsed.poly.has_value());
  CHECK(parsed.poly->m == 3);
  CHECK(parsed.poly->q[0] == GFPoly::one(2));
  CHECK(is_irreducible(parsed.poly->p));

  REQUIRE(run(kCli + " points --rule " + rule_path.string() + " --exact --out " +
              pts_path.string() + " 2>/dev/null") == 0);
  const std::string dump = slurp(pts_path);
  CHECK(dump.find("0.[") != std::string::npos);

  REQUIRE(run(kCli + " points --rule " + rule_path.string() +
              " --digital-shift --seed 3 --out " + pts_path.string() + " 2>/dev/null") == 0);
  CHECK(!slurp(pts_path).empty());
}

TEST_CASE("bound command reports grid minimum and assumption") {
  TempDir tmp;
  const fs::path out_path = tmp.path / "bound.txt";
  REQUIRE(run(kCli + " bound --kind lattice --M 257 --s 5 --alpha 2 --weights poly:2"
                     " --tau 0.5 --lambda-grid 0.5:0.05:1.95 > " +
              out_path.string() + " 2>/dev/null") == 0);
  const std::string text = slurp(out_path);
  CHECK(text.find("min bound=") != std::string::npos);
  CHECK(text.find("size assumption") != std::string::npos);

  REQUIRE(run(kCli + " bound --kind polylattice --b 2 --m 8 --s 5 --alpha 2 --weights poly:2"
                     " --tau 0.5 > " +
              out_path.string() + " 2>/dev/null") == 0);
  CHECK(slurp(out_path).find("min bound=") != std::string::npos);
}

TEST_CASE("experiment command writes deterministic outputs") {
  TempDir tmp;
  const std::string prefix1 = (tmp.path / "run1").string();
  const std::string prefix2 = (tmp.path / "run2").string();
  const std::string base = kCli +
                           " experiment --method rand-lattice-shift-tent --f f1 --s 4"
                           " --sizes 16,32,64,128 --R 4 --seed 3 --out-prefix ";
  REQUIRE(run(base + prefix1 + " --threads 1 >/dev/null 2>/dev/null") == 0);
  REQUIRE(run(base + prefix2 + " --threads 4 >/dev/null 2>/dev/null") == 0);
  CHECK(slurp(prefix1 + ".csv") == slurp(prefix2 + ".csv"));
  CHECK(slurp(prefix1 + "_summary.csv") == slurp(prefix2 + "_summary.csv"));
  CHECK(slurp(prefix1 + "_loglog.dat") == slurp(prefix2 + "_loglog.dat"));
  CHECK(slurp(prefix1 + ".csv").rfind("method,size,rep,n_points,estimate\n", 0) == 0);

  // too-short schedule is a usage error
  CHECK(run(kCli + " experiment --method mc --f f1 --s 2 --sizes 16,32 --R 4 --seed 1"
                   " --out-prefix " +
            (tmp.path / "short").string() + " >/dev/null 2>/dev/null") != 0);
}
