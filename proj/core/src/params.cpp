#include "rqmc/params.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rqmc {

Weights Weights::poly(double exponent) {
  Weights w;
  w.kind_ = Kind::Poly;
  w.value_ = exponent;
  return w;
}

Weights Weights::constant(double value) {
  Weights w;
  w.kind_ = Kind::Const;
  w.value_ = value;
  return w;
}

Weights Weights::list(std::vector<double> values) {
  Weights w;
  w.kind_ = Kind::List;
  w.list_ = std::move(values);
  return w;
}

Weights Weights::parse(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("weights spec must look like poly:2, const:0.5 or list:1,0.5,...");
  }
  const std::string head = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (body.empty()) {
    throw std::invalid_argument("weights spec has empty argument: " + spec);
  }
  if (head == "poly") {
    return poly(std::stod(body));
  }
  if (head == "const") {
    return constant(std::stod(body));
  }
  if (head == "list") {
    std::vector<double> values;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      values.push_back(std::stod(item));
    }
    if (values.empty()) {
      throw std::invalid_argument("weights list is empty: " + spec);
    }
    return list(std::move(values));
  }
  throw std::invalid_argument("unknown weights kind: " + head);
}

double Weights::gamma(std::size_t j) const {
  if (j == 0) {
    throw std::invalid_argument("weight index is 1-based");
  }
  switch (kind_) {
    case Kind::Poly:
      return std::pow(static_cast<double>(j), -value_);
    case Kind::Const:
      return value_;
    case Kind::List:
      if (j > list_.size()) {
        throw std::out_of_range("weights list shorter than requested dimension");
      }
      return list_[j - 1];
  }
  return 0.0;  // unreachable
}

std::string Weights::format() const {
  char buf[64];
  switch (kind_) {
    case Kind::Poly:
      std::snprintf(buf, sizeof buf, "poly:%.17g", value_);
      return buf;
    case Kind::Const:
      std::snprintf(buf, sizeof buf, "const:%.17g", value_);
      return buf;
    case Kind::List: {
      std::string out = "list:";
      for (std::size_t i = 0; i < list_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", list_[i]);
        if (i) out += ',';
        out += buf;
      }
      return out;
    }
  }
  return {};
}

bool Weights::valid_up_to(std::size_t s) const {
  for (std::size_t j = 1; j <= s; ++j) {
    double g;
    try {
      g = gamma(j);
    } catch (const std::out_of_range&) {
      return false;
    }
    if (!(g >= 0.0 && g <= 1.0)) return false;
  }
  return true;
}

void SpaceParams::validate() const {
  if (!(alpha > 0.5)) {
    throw std::invalid_argument("smoothness alpha must exceed 1/2");
  }
  if (s < 1) {
    throw std::invalid_argument("dimension s must be at least 1");
  }
  if (!weights.valid_up_to(static_cast<std::size_t>(s))) {
    throw std::invalid_argument("weights must lie in [0,1] and cover j = 1.." + std::to_string(s));
  }
}

}  // namespace rqmc
