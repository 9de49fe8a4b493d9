#pragma once

#include <optional>
#include <string>

#include "rqmc/korobov.hpp"
#include "rqmc/walsh.hpp"

namespace rqmc {

/// Construction metadata stored alongside a rule ("schema":"rqmc/1").
struct RuleMeta {
  std::uint64_t seed = 0;
  double tau = 0.5;
  double alpha = 2.0;
  std::string weights = "const:1";
};

std::string lattice_rule_json(const LatticeRule& rule, const RuleMeta& meta);
std::string poly_rule_json(const PolyLatticeRule& rule, const RuleMeta& meta);

struct ParsedRule {
  std::optional<LatticeRule> lattice;
  std::optional<PolyLatticeRule> poly;
  RuleMeta meta;
};

/// Parses either rule kind; throws std::invalid_argument on a schema or
/// shape violation.
ParsedRule parse_rule_json(const std::string& text);

}  // namespace rqmc
