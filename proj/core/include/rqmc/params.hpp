#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rqmc {

/// Coordinate weight sequence gamma_1, gamma_2, ... with values in [0,1].
/// Supported textual forms (used by the CLI and by rule JSON):
///   "poly:p"        gamma_j = j^-p
///   "const:c"       gamma_j = c
///   "list:a,b,..."  explicit per-coordinate values
class Weights {
 public:
  Weights() : kind_(Kind::Const), value_(1.0) {}

  static Weights poly(double exponent);
  static Weights constant(double value);
  static Weights list(std::vector<double> values);
  static Weights parse(const std::string& spec);

  /// gamma_j for 1-based coordinate index j. Throws if a list runs short.
  double gamma(std::size_t j) const;

  /// Round-trippable textual form.
  std::string format() const;

  /// True when every gamma_j available for j = 1..s lies in [0,1].
  bool valid_up_to(std::size_t s) const;

 private:
  enum class Kind { Poly, Const, List };
  Kind kind_;
  double value_ = 1.0;
  std::vector<double> list_;
};

/// Function-space parameters shared by criteria and error bounds:
/// smoothness alpha > 1/2, coordinate weights, dimension s.
struct SpaceParams {
  double alpha = 2.0;
  Weights weights;
  int s = 1;

  double gamma(int j) const { return weights.gamma(static_cast<std::size_t>(j)); }

  /// Throws std::invalid_argument on alpha <= 1/2, s < 1 or bad weights.
  void validate() const;
};

}  // namespace rqmc
