#pragma once

#include <cstdint>
#include <vector>

#include "conjdist/poly.hpp"

namespace conjdist {

struct PrimalityVerdict {
  bool primitive = false;
  bool irreducible = false;
  bool leading_positive = false;
  bool prime = false;  ///< primitive && irreducible && leading_positive
};

/// Largest degree accepted by the irreducibility test.
inline constexpr int kMaxIrreducibleDegree = 6;
/// Largest coefficient magnitude the exact 128-bit arithmetic supports.
inline constexpr std::int64_t kMaxIrreducibleCoefficient = 100'000;

/// gcd of the absolute values of the coefficients.
std::int64_t content(const IntPoly& q);

/// Irreducibility over Q by exhaustive bounded factor search. Degree-1
/// inputs are irreducible. Throws UnsupportedError above the caps.
bool is_irreducible(const IntPoly& q);

PrimalityVerdict is_prime_poly(const IntPoly& q);

/// Positive divisors of |v| (v != 0), ascending.
std::vector<std::int64_t> divisors(std::int64_t v);

/// Quotient of a by b when b divides a exactly over Z, else nullopt-like
/// false return. The quotient is written to `quotient`.
bool divides_exactly(const IntPoly& a, const IntPoly& b, IntPoly* quotient = nullptr);

}  // namespace conjdist
