#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "conjdist/heights.hpp"
#include "conjdist/region.hpp"
#include "conjdist/roots.hpp"

namespace conjdist {

/// Calls visit(q) once for every integer polynomial of degree n with
/// l_{p,w}[q] <= Q. Coefficients are looped from a_n down to a_0; for finite
/// p each axis only spans what the remaining budget Q^p - sum |w_i a_i|^p
/// allows. Norm ties are resolved with a relative slack of 1e-12.
/// With positive_leading only a_n > 0 is visited.
void enumerate_height_ball(const WeightedHeight& h, double Q,
                           const std::function<void(const IntPoly&)>& visit,
                           bool positive_leading = false);

/// The prime polynomials of the height ball.
void enumerate_prime(const WeightedHeight& h, double Q,
                     const std::function<void(const IntPoly&)>& visit);

/// Ordered tuples of k distinct real zeros and l distinct upper zeros of one
/// polynomial that land in B (closed boxes).
std::uint64_t tuples_in_region(const ClassifiedRoots& roots, const Region& B);

struct CountOptions {
  unsigned threads = 0;  ///< 0: default_threads()
  double real_tol = kDefaultRealTolerance;
};

struct CountReport {
  double Q = 0.0;
  std::uint64_t phi = 0;
  std::uint64_t primes_scanned = 0;
  /// All polynomials of the height ball (both signs of a_n).
  std::uint64_t scanned = 0;
  /// Reducible members of the height ball (both signs of a_n).
  std::uint64_t reducible_count = 0;
  std::uint64_t root_failures = 0;
  double runtime = 0.0;
  /// m -> number of primes q with mu_q(B) = m.
  std::map<std::uint64_t, std::uint64_t> multiplicity;

  void merge(const CountReport& other);
};

/// Phi(Q, B): the number of ordered zero tuples of prime polynomials of
/// height <= Q landing in B. Only a_n > 0 is enumerated; polynomials with
/// a_n < 0 are never prime and are reducible exactly when their negation
/// is, so the scanned and reducible tallies are doubled.
CountReport phi_count(const WeightedHeight& h, double Q, const Region& B,
                      const CountOptions& options = {});

struct ConvergenceRow {
  double Q = 0.0;
  std::uint64_t phi = 0;
  double ratio = 0.0;      ///< phi / Q^{n+1}
  double limit = 0.0;
  double deviation = 0.0;  ///< (ratio - limit) / limit
  /// |deviation| Q / log(Q)^chi, chi = 1 only for n = 2, l = 0.
  double envelope_constant = 0.0;
  std::uint64_t reducible_count = 0;
  std::uint64_t root_failures = 0;
  double runtime = 0.0;
};

struct ConvergenceTable {
  double limit = 0.0;
  int chi = 0;
  std::vector<ConvergenceRow> rows;
};

/// Exponent of the log factor in the error envelope.
int rate_log_exponent(int n, int l);

/// One phi_count per Q (ascending) against limit_integral(h, B). Heights
/// below min_i w_i give an empty table.
ConvergenceTable convergence_table(const WeightedHeight& h, const Region& B,
                                   const std::vector<double>& Q_list,
                                   const CountOptions& options = {});

/// Columns Q, phi, phi_over_Qn1, limit, deviation, reducible_count,
/// runtime_s. Runtimes are written as NA unless with_runtime is set, so that
/// identical jobs produce identical bytes.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table, bool with_runtime);

}  // namespace conjdist
