#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rqmc/korobov.hpp"
#include "rqmc/random.hpp"
#include "rqmc/walsh.hpp"

namespace rqmc {

enum class Provenance { Plain, Shifted, Tented, ShiftedTented, DigitalShifted };

/// Quadrature nodes in [0,1)^s (tented coordinates may reach 1 exactly).
struct PointSet {
  int s = 0;
  std::size_t n = 0;
  std::vector<double> coords;  // row-major, n x s
  Provenance provenance = Provenance::Plain;

  double operator()(std::size_t i, int j) const {
    return coords[i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)];
  }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(s), static_cast<std::size_t>(s)};
  }
};

/// The N lattice nodes {n z / N}, coordinates computed as exact integer
/// residues (n z_j mod N) / N.
PointSet lattice_points(const LatticeRule& rule);

/// One uniform shift vector applied to every point modulo 1.
PointSet random_shift(const PointSet& ps, RandomSource& rng);

/// Shift by a caller-chosen vector (test hook; delta coordinates in [0,1)).
PointSet shift_by(const PointSet& ps, std::span<const double> delta);

/// Componentwise tent transform phi(x) = 1 - |2x - 1|.
PointSet tent(const PointSet& ps);

/// One coordinate of an infinite-precision polynomial lattice point:
/// the residue v = n q_j mod p determines the digit stream of v/p, whose
/// period makes the value the exact rational (leading digits)/(b^k - 1).
struct PolyPointExact {
  std::uint64_t residue_enc = 0;
  int first_nonzero = 0;  // index of the first nonzero digit; 0 means v = 0
  double value = 0.0;     // nearest double on demand
  bool exact_available = false;
  std::uint64_t num = 0;  // value = num / den exactly when representable
  std::uint64_t den = 1;
};

struct PolyPointSet {
  PolyLatticeRule rule;
  std::uint64_t period = 0;  // digit period, shared by all coordinates
  std::vector<PolyPointExact> entries;  // row-major, b^m x s

  const PolyPointExact& entry(std::size_t i, int j) const {
    return entries[i * static_cast<std::size_t>(rule.s()) + static_cast<std::size_t>(j)];
  }
  /// First `count` expansion digits of coordinate j of point i.
  std::vector<std::uint8_t> digits(std::size_t i, int j, std::size_t count) const;
};

/// Finite-precision points: coordinate sum_{i<=d} u_i b^{-i}. Any nonzero
/// modulus is allowed at finite precision.
PointSet poly_lattice_points(const PolyLatticeRule& rule, int d);

/// Infinite-precision points; requires p irreducible and p != x.
PolyPointSet poly_lattice_points_exact(const PolyLatticeRule& rule);

/// Rounded view of the exact points.
PointSet to_point_set(const PolyPointSet& ps);

/// Digitwise sum mod b; sigma digits beyond x's length extend x with zeros,
/// x digits beyond sigma's length pass through unchanged.
std::vector<std::uint8_t> digitwise_add(std::span<const std::uint8_t> x,
                                        std::span<const std::uint8_t> sigma, std::uint32_t b);

/// 53 digits for b = 2, ceil(53 / log2 b) otherwise: saturates a double.
int default_digital_shift_digits(std::uint32_t b);

/// One random digit vector of s * d_shift digits added digitwise mod b to
/// every point; requires d_shift >= m.
PointSet digital_shift(const PolyPointSet& ps, RandomSource& rng, int d_shift);

/// Digital shift by caller-chosen digits (test hook); sigma_digits[j] holds
/// the shift digits of coordinate j.
PointSet digital_shift_with(const PolyPointSet& ps,
                            const std::vector<std::vector<std::uint8_t>>& sigma_digits);

/// Equal-weight quadrature average with compensated summation. Integrands
/// must accept the closed cube (tented points may hit 1).
double integrate(const std::function<double(std::span<const double>)>& f, const PointSet& ps);

}  // namespace rqmc
