#include "rqmc/gfpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace rqmc {

namespace {

bool small_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void check_base(std::uint32_t b) {
  if (!small_prime(b)) {
    throw std::invalid_argument("GFPoly base must be prime");
  }
}

void check_same_base(const GFPoly& a, const GFPoly& b) {
  if (a.base() != b.base()) {
    throw std::invalid_argument("GFPoly base mismatch");
  }
}

// Multiplicative inverse mod prime b.
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t b) {
  std::int64_t t = 0, new_t = 1, r = b, new_r = a % b;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::invalid_argument("element not invertible");
  return static_cast<std::uint32_t>(t < 0 ? t + b : t);
}

}  // namespace

GFPoly::GFPoly(std::uint32_t base) : base_(base) { check_base(base); }

GFPoly::GFPoly(std::uint32_t base, std::vector<std::uint8_t> coeffs)
    : base_(base), coeffs_(std::move(coeffs)) {
  check_base(base);
  for (auto& c : coeffs_) c = static_cast<std::uint8_t>(c % base_);
  canonicalize();
}

void GFPoly::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

GFPoly GFPoly::one(std::uint32_t base) { return GFPoly(base, {1}); }

GFPoly GFPoly::x(std::uint32_t base) { return GFPoly(base, {0, 1}); }

GFPoly GFPoly::monomial(std::uint32_t base, int degree, std::uint8_t coeff) {
  if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
  std::vector<std::uint8_t> c(static_cast<std::size_t>(degree) + 1, 0);
  c.back() = coeff;
  return GFPoly(base, std::move(c));
}

GFPoly GFPoly::from_string(const std::string& text, std::uint32_t base) {
  std::vector<std::uint8_t> coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int v = std::stoi(item);
    if (v < 0) throw std::invalid_argument("polynomial coefficients must be non-negative");
    coeffs.push_back(static_cast<std::uint8_t>(v));
  }
  return GFPoly(base, std::move(coeffs));
}

std::string GFPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(static_cast<int>(coeffs_[i]));
  }
  return out;
}

GFPoly GFPoly::from_encoding(std::uint64_t enc, std::uint32_t base) {
  std::vector<std::uint8_t> coeffs;
  while (enc != 0) {
    coeffs.push_back(static_cast<std::uint8_t>(enc % base));
    enc /= base;
  }
  return GFPoly(base, std::move(coeffs));
}

std::uint64_t GFPoly::encoding() const {
  std::uint64_t enc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    enc = enc * base_ + *it;
  }
  return enc;
}

GFPoly add(const GFPoly& a, const GFPoly& b) {
  check_same_base(a, b);
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<std::uint8_t> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = static_cast<std::uint8_t>((a.coeff(i) + b.coeff(i)) % a.base());
  }
  return GFPoly(a.base(), std::move(c));
}

GFPoly sub(const GFPoly& a, const GFPoly& b) {
  check_same_base(a, b);
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<std::uint8_t> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = static_cast<std::uint8_t>((a.coeff(i) + a.base() - b.coeff(i)) % a.base());
  }
  return GFPoly(a.base(), std::move(c));
}

GFPoly mul(const GFPoly& a, const GFPoly& b) {
  check_same_base(a, b);
  if (a.is_zero() || b.is_zero()) return GFPoly::zero(a.base());
  std::vector<std::uint8_t> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeff(i) == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      c[i + j] = static_cast<std::uint8_t>((c[i + j] + a.coeff(i) * b.coeff(j)) % a.base());
    }
  }
  return GFPoly(a.base(), std::move(c));
}

std::pair<GFPoly, GFPoly> divmod(const GFPoly& a, const GFPoly& d) {
  check_same_base(a, d);
  if (d.is_zero()) throw std::invalid_argument("polynomial division by zero");
  const std::uint32_t b = a.base();
  if (a.degree() < d.degree()) return {GFPoly::zero(b), a};
  const std::uint32_t lead_inv = inv_mod(d.coeffs().back(), b);
  std::vector<std::uint8_t> rem(a.coeffs());
  std::vector<std::uint8_t> quot(static_cast<std::size_t>(a.degree() - d.degree()) + 1, 0);
  for (int i = a.degree(); i >= d.degree(); --i) {
    const std::uint32_t r = rem[static_cast<std::size_t>(i)];
    if (r == 0) continue;
    const std::uint32_t q = (r * lead_inv) % b;
    quot[static_cast<std::size_t>(i - d.degree())] = static_cast<std::uint8_t>(q);
    for (int j = 0; j <= d.degree(); ++j) {
      auto& slot = rem[static_cast<std::size_t>(i - d.degree() + j)];
      slot = static_cast<std::uint8_t>((slot + b * b - q * d.coeff(static_cast<std::size_t>(j))) % b);
    }
  }
  return {GFPoly(b, std::move(quot)), GFPoly(b, std::move(rem))};
}

GFPoly mod(const GFPoly& a, const GFPoly& d) { return divmod(a, d).second; }

GFPoly poly_mod_mul(const GFPoly& a, const GFPoly& c, const GFPoly& p) {
  check_same_base(a, c);
  check_same_base(a, p);
  if (p.is_zero()) throw std::invalid_argument("modulus must be nonzero");
  return mod(mul(a, c), p);
}

GFPoly pow_x_mod(std::uint64_t e, const GFPoly& p) {
  GFPoly result = mod(GFPoly::one(p.base()), p);
  GFPoly square = mod(GFPoly::x(p.base()), p);
  while (e != 0) {
    if (e & 1) result = poly_mod_mul(result, square, p);
    square = poly_mod_mul(square, square, p);
    e >>= 1;
  }
  return result;
}

namespace {

GFPoly gcd(GFPoly a, GFPoly b) {
  while (!b.is_zero()) {
    a = std::exchange(b, mod(a, b));
  }
  return a;
}

// b^m as uint64, throwing on overflow.
std::uint64_t checked_pow(std::uint32_t b, int m) {
  std::uint64_t v = 1;
  for (int i = 0; i < m; ++i) {
    if (v > std::uint64_t(-1) / b) throw std::overflow_error("b^m exceeds 64 bits");
    v *= b;
  }
  return v;
}

bool irreducible_by_trial_division(const GFPoly& p) {
  const std::uint32_t b = p.base();
  for (int d = 1; 2 * d <= p.degree(); ++d) {
    const std::uint64_t lo = checked_pow(b, d);
    const std::uint64_t hi = checked_pow(b, d + 1);
    for (std::uint64_t enc = lo; enc < hi; ++enc) {
      if (mod(p, GFPoly::from_encoding(enc, b)).is_zero()) return false;
    }
  }
  return true;
}

// Rabin test: p of degree m is irreducible iff x^{b^m} = x (mod p) and
// gcd(x^{b^{m/l}} - x, p) = 1 for every prime l dividing m.
bool irreducible_by_frobenius(const GFPoly& p) {
  const std::uint32_t b = p.base();
  const int m = p.degree();
  const GFPoly xp = mod(GFPoly::x(b), p);

  auto bth_power = [&](const GFPoly& t) {
    GFPoly acc = mod(GFPoly::one(b), p);
    GFPoly sq = t;
    std::uint32_t e = b;
    while (e != 0) {
      if (e & 1) acc = poly_mod_mul(acc, sq, p);
      sq = poly_mod_mul(sq, sq, p);
      e >>= 1;
    }
    return acc;
  };

  std::vector<GFPoly> frob{xp};  // frob[j] = x^{b^j} mod p
  for (int j = 1; j <= m; ++j) frob.push_back(bth_power(frob.back()));
  if (!(frob[static_cast<std::size_t>(m)] == xp)) return false;

  std::vector<int> prime_factors;
  int rest = m;
  for (int l = 2; l * l <= rest; ++l) {
    if (rest % l == 0) {
      prime_factors.push_back(l);
      while (rest % l == 0) rest /= l;
    }
  }
  if (rest > 1) prime_factors.push_back(rest);
  for (int l : prime_factors) {
    if (gcd(sub(frob[static_cast<std::size_t>(m / l)], xp), p).degree() > 0) return false;
  }
  return true;
}

}  // namespace

bool is_irreducible(const GFPoly& p) {
  if (p.degree() < 1) {
    throw std::invalid_argument("irreducibility test requires degree >= 1");
  }
  if (p.degree() == 1) return true;
  if (p.degree() <= 8) return irreducible_by_trial_division(p);
  return irreducible_by_frobenius(p);
}

std::vector<GFPoly> enumerate_monic_irreducibles(std::uint32_t b, int m) {
  check_base(b);
  if (m < 1) throw std::invalid_argument("degree m must be >= 1");
  const std::uint64_t lead = checked_pow(b, m);
  std::vector<GFPoly> out;
  for (std::uint64_t low = 0; low < lead; ++low) {
    GFPoly p = GFPoly::from_encoding(lead + low, b);
    if (is_irreducible(p)) out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::uint8_t> laurent_expand(const GFPoly& v, const GFPoly& p, std::size_t count) {
  check_same_base(v, p);
  if (p.is_zero()) throw std::invalid_argument("Laurent expansion needs p != 0");
  if (v.degree() >= p.degree()) {
    throw std::invalid_argument("Laurent expansion needs deg(v) < deg(p)");
  }
  const std::uint32_t b = v.base();
  const int m = p.degree();
  if (m == 0) {
    return std::vector<std::uint8_t>(count, 0);  // v must be zero here
  }
  const std::uint32_t lead_inv = inv_mod(p.coeffs().back(), b);
  // State w with deg(w) < m; each step multiplies by x and emits the
  // quotient digit of (w*x)/p.
  std::vector<std::uint8_t> w(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < v.coeffs().size(); ++i) w[i] = v.coeff(i);
  std::vector<std::uint8_t> digits;
  digits.reserve(count);
  for (std::size_t step = 0; step < count; ++step) {
    const std::uint32_t top = w[static_cast<std::size_t>(m - 1)];
    std::uint8_t digit = 0;
    if (top != 0) {
      digit = static_cast<std::uint8_t>((top * lead_inv) % b);
    }
    // w = w*x - digit*p, kept at degree < m.
    for (int i = m - 1; i > 0; --i) {
      const std::uint32_t lower = w[static_cast<std::size_t>(i - 1)];
      w[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
          (lower + b * b - digit * p.coeff(static_cast<std::size_t>(i))) % b);
    }
    w[0] = static_cast<std::uint8_t>((b * b - digit * p.coeff(0)) % b);
    digits.push_back(digit);
  }
  return digits;
}

std::uint64_t expansion_period(const GFPoly& v, const GFPoly& p) {
  check_same_base(v, p);
  if (p.degree() < 1 || !is_irreducible(p)) {
    throw std::invalid_argument("expansion_period requires irreducible p");
  }
  if (p == GFPoly::x(p.base())) {
    throw std::invalid_argument("expansion_period requires p != x");
  }
  if (v.is_zero() || v.degree() >= p.degree()) {
    throw std::invalid_argument("expansion_period requires v != 0 with deg(v) < deg(p)");
  }
  // Multiplicative order of x in F_b[x]/(p): strip prime factors from
  // b^m - 1 while x^{n/f} stays 1.
  std::uint64_t n = checked_pow(p.base(), p.degree()) - 1;
  const GFPoly one = GFPoly::one(p.base());
  std::uint64_t remaining = n;
  for (std::uint64_t f = 2; f * f <= remaining; ++f) {
    if (remaining % f != 0) continue;
    while (remaining % f == 0) remaining /= f;
    while (n % f == 0 && pow_x_mod(n / f, p) == one) n /= f;
  }
  if (remaining > 1) {
    while (n % remaining == 0 && pow_x_mod(n / remaining, p) == one) n /= remaining;
  }
  return n;
}

}  // namespace rqmc
