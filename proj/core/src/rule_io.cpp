#include "rqmc/rule_io.hpp"

#include <stdexcept>

#include <json.hpp>

namespace rqmc {

namespace {

using nlohmann::json;

json meta_json(const RuleMeta& meta) {
  return {{"seed", meta.seed}, {"tau", meta.tau}, {"alpha", meta.alpha},
          {"weights", meta.weights}};
}

RuleMeta meta_from(const json& j) {
  RuleMeta meta;
  meta.seed = j.value("seed", std::uint64_t{0});
  meta.tau = j.value("tau", 0.5);
  meta.alpha = j.value("alpha", 2.0);
  meta.weights = j.value("weights", std::string("const:1"));
  return meta;
}

}  // namespace

std::string lattice_rule_json(const LatticeRule& rule, const RuleMeta& meta) {
  rule.validate();
  json j = meta_json(meta);
  j["schema"] = "rqmc/1";
  j["kind"] = "lattice";
  j["N"] = rule.N;
  j["s"] = rule.s();
  j["z"] = rule.z;
  return j.dump(2) + "\n";
}

std::string poly_rule_json(const PolyLatticeRule& rule, const RuleMeta& meta) {
  rule.validate();
  json j = meta_json(meta);
  j["schema"] = "rqmc/1";
  j["kind"] = "polylattice";
  j["b"] = rule.b;
  j["m"] = rule.m;
  j["s"] = rule.s();
  j["p"] = rule.p.to_string();
  json q = json::array();
  for (const auto& qj : rule.q) q.push_back(qj.to_string());
  j["q"] = q;
  return j.dump(2) + "\n";
}

ParsedRule parse_rule_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("rule JSON malformed: ") + e.what());
  }
  if (j.value("schema", std::string{}) != "rqmc/1") {
    throw std::invalid_argument("rule JSON must declare \"schema\":\"rqmc/1\"");
  }
  ParsedRule out;
  out.meta = meta_from(j);
  const std::string kind = j.value("kind", std::string{});
  if (kind == "lattice") {
    LatticeRule rule;
    rule.N = j.at("N").get<std::uint64_t>();
    rule.z = j.at("z").get<std::vector<std::uint32_t>>();
    rule.validate();
    out.lattice = std::move(rule);
  } else if (kind == "polylattice") {
    PolyLatticeRule rule;
    rule.b = j.at("b").get<std::uint32_t>();
    rule.m = j.at("m").get<int>();
    rule.p = GFPoly::from_string(j.at("p").get<std::string>(), rule.b);
    rule.q.clear();
    for (const auto& qj : j.at("q")) {
      rule.q.push_back(GFPoly::from_string(qj.get<std::string>(), rule.b));
    }
    rule.validate();
    out.poly = std::move(rule);
  } else {
    throw std::invalid_argument("rule JSON kind must be lattice or polylattice");
  }
  return out;
}

}  // namespace rqmc
