#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "conjdist/heights.hpp"

namespace conjdist {

/// A bounded region A of R^d, A inside [-bound, bound]^d.
struct LatticeRegion {
  int dimension = 0;
  double bound = 1.0;
  std::function<bool(std::span<const double>)> contains;
  /// Optional: the interval of coordinate prefix.size() compatible with the
  /// given leading coordinates. Enables per-axis pruning.
  std::function<std::pair<double, double>(std::span<const double>)> axis_range;
  /// When true, axis_range describes A exactly and the innermost axis is
  /// counted without membership tests.
  bool ranges_exact = false;

  /// Axis-aligned box prod [lo_i, hi_i].
  static LatticeRegion box(std::vector<double> lo, std::vector<double> hi);
  static LatticeRegion cube(int d, double lo, double hi);
  /// Closed unit ball of the (unweighted) l_p norm.
  static LatticeRegion lp_ball(int d, PNorm p);
};

/// lambda(QA): integer vectors v with v / Q in A.
std::uint64_t count_integer_points(const LatticeRegion& region, double Q, unsigned threads = 0);

struct CoprimeCount {
  std::uint64_t value = 0;
  std::optional<std::uint64_t> direct;  ///< gcd filter, when the scan is small
  std::uint64_t mobius = 0;             ///< Moebius inversion over dilations
};

enum class CoprimeMethod { Auto, Direct, Mobius, Both };

/// lambda*(QA): integer vectors in QA with coordinate gcd 1 (origin excluded).
/// Auto runs the direct scan when d (2QN)^d <= 1e8 and Moebius inversion
/// always; when both run they must agree.
CoprimeCount count_coprime_points(const LatticeRegion& region, double Q,
                                  CoprimeMethod method = CoprimeMethod::Auto,
                                  unsigned threads = 0);

/// Moebius function.
int mobius(std::uint64_t k);

/// mu(1..K) by a linear sieve; entry 0 is unused.
std::vector<int> mobius_table(std::uint64_t K);

}  // namespace conjdist
