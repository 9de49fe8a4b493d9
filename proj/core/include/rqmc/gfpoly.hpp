#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rqmc {

/// Dense polynomial over the prime field F_b. Coefficient i belongs to x^i;
/// the representation is canonical (no trailing zero coefficients, values
/// reduced mod b). The zero polynomial has an empty coefficient vector and
/// degree() reports the -1 sentinel standing in for -infinity.
class GFPoly {
 public:
  explicit GFPoly(std::uint32_t base);
  GFPoly(std::uint32_t base, std::vector<std::uint8_t> coeffs);

  static GFPoly zero(std::uint32_t base) { return GFPoly(base); }
  static GFPoly one(std::uint32_t base);
  static GFPoly x(std::uint32_t base);
  static GFPoly monomial(std::uint32_t base, int degree, std::uint8_t coeff = 1);

  /// Ascending coefficient list, e.g. "1,1,0,1" = 1 + x + x^3.
  static GFPoly from_string(const std::string& text, std::uint32_t base);
  std::string to_string() const;

  /// Integer encoding sum_i c_i b^i; also the tie-break order.
  static GFPoly from_encoding(std::uint64_t enc, std::uint32_t base);
  std::uint64_t encoding() const;

  std::uint32_t base() const { return base_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  std::uint8_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
  const std::vector<std::uint8_t>& coeffs() const { return coeffs_; }

  friend bool operator==(const GFPoly& a, const GFPoly& b) {
    return a.base_ == b.base_ && a.coeffs_ == b.coeffs_;
  }

 private:
  std::uint32_t base_;
  std::vector<std::uint8_t> coeffs_;
  void canonicalize();
};

GFPoly add(const GFPoly& a, const GFPoly& b);
GFPoly sub(const GFPoly& a, const GFPoly& b);
GFPoly mul(const GFPoly& a, const GFPoly& b);

/// Quotient and remainder of a by d (d != 0, any leading coefficient).
std::pair<GFPoly, GFPoly> divmod(const GFPoly& a, const GFPoly& d);

GFPoly mod(const GFPoly& a, const GFPoly& d);

/// a * c mod p in canonical form. Throws on base mismatch or p = 0.
GFPoly poly_mod_mul(const GFPoly& a, const GFPoly& c, const GFPoly& p);

/// x^e mod p by square and multiply.
GFPoly pow_x_mod(std::uint64_t e, const GFPoly& p);

/// True iff p (degree >= 1) has no nontrivial factor over F_b.
/// Exhaustive divisor test up to degree 8, Frobenius/gcd criterion above.
bool is_irreducible(const GFPoly& p);

/// All monic irreducible polynomials of degree m over F_b, ascending by
/// integer encoding. Size is at least b^m / (2m).
std::vector<GFPoly> enumerate_monic_irreducibles(std::uint32_t b, int m);

/// First `count` fractional Laurent digits u_1..u_count of v(x)/p(x),
/// requiring deg(v) < deg(p) and p != 0. The polynomial part of the
/// quotient never arises under the degree precondition.
std::vector<std::uint8_t> laurent_expand(const GFPoly& v, const GFPoly& p, std::size_t count);

/// Least k >= 1 with u_{i+k} = u_i for the Laurent digits of v/p, for
/// irreducible p != x and v != 0 with deg(v) < deg(p). Equals the
/// multiplicative order of x in F_b[x]/(p), independent of v.
std::uint64_t expansion_period(const GFPoly& v, const GFPoly& p);

}  // namespace rqmc
