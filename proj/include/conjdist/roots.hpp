#pragma once

#include <stdexcept>
#include <vector>

#include "conjdist/poly.hpp"

namespace conjdist {

/// Zeros of a real polynomial split into the real line and the open upper
/// half-plane; lower half-plane zeros are the conjugates of `uppers`.
struct ClassifiedRoots {
  std::vector<double> reals;    ///< ascending
  std::vector<Complex> uppers;  ///< lexicographic by (re, im), im > 0
  double residual = 0.0;        ///< max |q(root)| over all roots

  int count() const { return static_cast<int>(reals.size() + 2 * uppers.size()); }
};

/// Thrown when the simultaneous iteration does not converge; carries the
/// best classification reached.
class RootFindingError : public std::runtime_error {
 public:
  RootFindingError(const std::string& what, ClassifiedRoots partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const ClassifiedRoots& partial() const { return partial_; }

 private:
  ClassifiedRoots partial_;
};

inline constexpr double kDefaultRealTolerance = 1e-10;
/// Accepted residual relative to sum |a_i| max(1, |root|)^n.
inline constexpr double kRootAcceptTolerance = 1e-8;

/// All zeros of q via Aberth-Ehrlich iteration with Newton polishing.
/// A zero with |Im| <= real_tol (1 + |Re|) is treated as real.
ClassifiedRoots find_roots(const RealPoly& q, double real_tol = kDefaultRealTolerance);

/// All n zeros as complex numbers, unclassified, in iteration order.
std::vector<Complex> all_roots(const RealPoly& q);

}  // namespace conjdist
