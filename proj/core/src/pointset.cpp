#include "rqmc/pointset.hpp"

#include <cmath>
#include <stdexcept>

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

double fractional(double y) {
  y -= std::floor(y);
  return y < 1.0 ? y : 0.0;
}

}  // namespace

PointSet lattice_points(const LatticeRule& rule) {
  rule.validate();
  PointSet ps;
  ps.s = rule.s();
  ps.n = rule.N;
  ps.coords.resize(ps.n * static_cast<std::size_t>(ps.s));
  const double inv_n = 1.0 / static_cast<double>(rule.N);
  for (std::uint64_t n = 0; n < rule.N; ++n) {
    for (int j = 0; j < ps.s; ++j) {
      const std::uint64_t r = (n * rule.z[static_cast<std::size_t>(j)]) % rule.N;
      ps.coords[n * static_cast<std::size_t>(ps.s) + static_cast<std::size_t>(j)] =
          static_cast<double>(r) * inv_n;
    }
  }
  return ps;
}

PointSet shift_by(const PointSet& ps, std::span<const double> delta) {
  if (static_cast<int>(delta.size()) != ps.s) {
    throw std::invalid_argument("shift vector dimension mismatch");
  }
  PointSet out = ps;
  for (std::size_t i = 0; i < ps.n; ++i) {
    for (int j = 0; j < ps.s; ++j) {
      auto& c = out.coords[i * static_cast<std::size_t>(ps.s) + static_cast<std::size_t>(j)];
      c = fractional(c + delta[static_cast<std::size_t>(j)]);
    }
  }
  out.provenance = Provenance::Shifted;
  return out;
}

PointSet random_shift(const PointSet& ps, RandomSource& rng) {
  std::vector<double> delta(static_cast<std::size_t>(ps.s));
  for (auto& d : delta) d = rng.next_double01();
  return shift_by(ps, delta);
}

PointSet tent(const PointSet& ps) {
  PointSet out = ps;
  for (auto& c : out.coords) c = 1.0 - std::abs(2.0 * c - 1.0);
  out.provenance =
      ps.provenance == Provenance::Shifted ? Provenance::ShiftedTented : Provenance::Tented;
  return out;
}

namespace {

std::uint64_t ipow64(std::uint64_t b, int e) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) v *= b;
  return v;
}

// Value of a digit prefix sum_{i=1}^{K} u_i b^{-i}, Horner from the tail.
double prefix_value(std::span<const std::uint8_t> digits, std::uint32_t b) {
  double acc = 0.0;
  const double inv_b = 1.0 / b;
  for (std::size_t i = digits.size(); i-- > 0;) {
    acc = (acc + digits[i]) * inv_b;
  }
  return acc;
}

}  // namespace

std::vector<std::uint8_t> PolyPointSet::digits(std::size_t i, int j, std::size_t count) const {
  const PolyPointExact& e = entry(i, j);
  const GFPoly v = GFPoly::from_encoding(e.residue_enc, rule.b);
  return laurent_expand(v, rule.p, count);
}

PointSet poly_lattice_points(const PolyLatticeRule& rule, int d) {
  rule.validate();
  if (d < 1) throw std::invalid_argument("precision d must be >= 1");
  const std::uint64_t bn = rule.n_points();
  PointSet ps;
  ps.s = rule.s();
  ps.n = bn;
  ps.coords.resize(ps.n * static_cast<std::size_t>(ps.s));
  for (std::uint64_t n = 0; n < bn; ++n) {
    const GFPoly npoly = GFPoly::from_encoding(n, rule.b);
    for (int j = 0; j < ps.s; ++j) {
      const GFPoly v = poly_mod_mul(npoly, rule.q[static_cast<std::size_t>(j)], rule.p);
      const auto digits = laurent_expand(v, rule.p, static_cast<std::size_t>(d));
      ps.coords[n * static_cast<std::size_t>(ps.s) + static_cast<std::size_t>(j)] =
          prefix_value(digits, rule.b);
    }
  }
  return ps;
}

PolyPointSet poly_lattice_points_exact(const PolyLatticeRule& rule) {
  rule.validate();
  if (rule.p == GFPoly::x(rule.b)) {
    throw std::invalid_argument("infinite precision requires p != x");
  }
  if (!is_irreducible(rule.p)) {
    throw std::invalid_argument("infinite precision requires an irreducible modulus");
  }
  PolyPointSet out;
  out.rule = rule;
  out.period = expansion_period(GFPoly::one(rule.b), rule.p);
  const std::uint64_t bn = rule.n_points();
  out.entries.resize(bn * static_cast<std::size_t>(rule.s()));

  // b^k - 1 fits a 64-bit integer only for short periods; otherwise the
  // value is taken from a 64-bit digit prefix (absolute error < b^-96).
  const bool exact_ok = static_cast<double>(out.period) * std::log2(rule.b) <= 63.0;
  const std::uint64_t den = exact_ok ? ipow64(rule.b, static_cast<int>(out.period)) - 1 : 1;

  for (std::uint64_t n = 0; n < bn; ++n) {
    const GFPoly npoly = GFPoly::from_encoding(n, rule.b);
    for (int j = 0; j < rule.s(); ++j) {
      PolyPointExact e;
      const GFPoly v = poly_mod_mul(npoly, rule.q[static_cast<std::size_t>(j)], rule.p);
      e.residue_enc = v.encoding();
      if (v.is_zero()) {
        e.first_nonzero = 0;
        e.value = 0.0;
        e.exact_available = true;
        e.num = 0;
        e.den = exact_ok ? den : 1;
      } else {
        e.first_nonzero = rule.m - v.degree();
        if (exact_ok) {
          const auto digits =
              laurent_expand(v, rule.p, static_cast<std::size_t>(out.period));
          std::uint64_t num = 0;
          for (std::uint8_t u : digits) num = num * rule.b + u;
          e.exact_available = true;
          e.num = num;
          e.den = den;
          e.value = static_cast<double>(num) / static_cast<double>(den);
        } else {
          const std::size_t count =
              static_cast<std::size_t>(std::ceil(96.0 / std::log2(rule.b)));
          const auto digits = laurent_expand(v, rule.p, count);
          e.exact_available = false;
          e.value = prefix_value(digits, rule.b);
        }
      }
      out.entries[n * static_cast<std::size_t>(rule.s()) + static_cast<std::size_t>(j)] = e;
    }
  }
  return out;
}

PointSet to_point_set(const PolyPointSet& ps) {
  PointSet out;
  out.s = ps.rule.s();
  out.n = ps.rule.n_points();
  out.coords.resize(out.n * static_cast<std::size_t>(out.s));
  for (std::size_t i = 0; i < ps.entries.size(); ++i) out.coords[i] = ps.entries[i].value;
  return out;
}

std::vector<std::uint8_t> digitwise_add(std::span<const std::uint8_t> x,
                                        std::span<const std::uint8_t> sigma, std::uint32_t b) {
  std::vector<std::uint8_t> out(std::max(x.size(), sigma.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t xi = i < x.size() ? x[i] : 0;
    const std::uint32_t si = i < sigma.size() ? sigma[i] : 0;
    out[i] = static_cast<std::uint8_t>((xi + si) % b);
  }
  return out;
}

int default_digital_shift_digits(std::uint32_t b) {
  if (b == 2) return 53;
  return static_cast<int>(std::ceil(53.0 / std::log2(static_cast<double>(b))));
}

PointSet digital_shift_with(const PolyPointSet& ps,
                            const std::vector<std::vector<std::uint8_t>>& sigma_digits) {
  const int s = ps.rule.s();
  if (static_cast<int>(sigma_digits.size()) != s) {
    throw std::invalid_argument("digital shift dimension mismatch");
  }
  const std::uint32_t b = ps.rule.b;
  PointSet out;
  out.s = s;
  out.n = ps.rule.n_points();
  out.coords.resize(out.n * static_cast<std::size_t>(s));
  out.provenance = Provenance::DigitalShifted;
  for (std::size_t i = 0; i < out.n; ++i) {
    for (int j = 0; j < s; ++j) {
      const auto& sigma = sigma_digits[static_cast<std::size_t>(j)];
      const std::size_t d_shift = sigma.size();
      const auto xd = ps.digits(i, j, d_shift);
      const auto shifted = digitwise_add(xd, sigma, b);
      // Digits beyond d_shift are unchanged: add the exact tail back.
      const PolyPointExact& e = ps.entry(i, j);
      const double tail = e.value - prefix_value(xd, b);
      out.coords[i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)] =
          prefix_value(shifted, b) + tail;
    }
  }
  return out;
}

PointSet digital_shift(const PolyPointSet& ps, RandomSource& rng, int d_shift) {
  if (d_shift < ps.rule.m) {
    throw std::invalid_argument("digital shift must cover at least m digits");
  }
  const std::uint32_t b = ps.rule.b;
  std::vector<std::vector<std::uint8_t>> sigma(static_cast<std::size_t>(ps.rule.s()));
  for (auto& coord : sigma) {
    coord.resize(static_cast<std::size_t>(d_shift));
    for (auto& digit : coord) digit = static_cast<std::uint8_t>(pick_uniform(rng, b));
  }
  return digital_shift_with(ps, sigma);
}

double integrate(const std::function<double(std::span<const double>)>& f, const PointSet& ps) {
  if (ps.n == 0) throw std::invalid_argument("cannot integrate over an empty point set");
  CompensatedSum acc;
  for (std::size_t i = 0; i < ps.n; ++i) acc.add(f(ps.point(i)));
  return acc.value() / static_cast<double>(ps.n);
}

}  // namespace rqmc
