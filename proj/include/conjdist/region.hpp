#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "conjdist/poly.hpp"

namespace conjdist {

/// Closed interval of the real line; either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const;
  double length() const { return hi - lo; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// Closed rectangle [re_lo, re_hi] x [im_lo, im_hi] of the upper half-plane.
struct UpperRect {
  Interval re;
  Interval im{0.0, std::numeric_limits<double>::infinity()};

  bool contains(const Complex& z) const { return re.contains(z.real()) && im.contains(z.imag()); }
  /// Mirror image under z -> -conj(z).
  UpperRect mirrored() const { return {{-re.hi, -re.lo}, im}; }
};

/// Product of k intervals and l upper rectangles.
struct RegionBox {
  std::vector<Interval> reals;
  std::vector<UpperRect> uppers;

  bool contains(const std::vector<double>& x, const std::vector<Complex>& z) const;
  /// Lebesgue measure in R^k x C^l (may be infinite).
  double measure() const;
};

/// Finite union of boxes in R^k x C_+^l. Boxes are assumed pairwise
/// disjoint when integrals over the region are taken; tuple counting tests
/// membership in the union and is exact either way.
struct Region {
  int k = 0;
  int l = 0;
  std::vector<RegionBox> boxes;

  static Region real_interval(double lo, double hi);
  static Region whole_real_line();
  static Region upper_rect(double re_lo, double re_hi, double im_lo, double im_hi);

  /// Throws DomainError unless 0 < k + 2l <= n, every box has k intervals
  /// and l rectangles, intervals are ordered and rectangles sit in the closed
  /// upper half-plane.
  void validate(int n) const;
  bool contains(const std::vector<double>& x, const std::vector<Complex>& z) const;
};

}  // namespace conjdist
