#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace conjdist {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Gamma function for positive arguments. Throws DomainError for x <= 0.
double gamma(double x);

/// Riemann zeta at integer s >= 2. Throws DomainError for s < 2.
double zeta(int s);

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// A reproducible random substream. Identical (seed, stream_id) always
/// produce the identical sequence; distinct stream ids are used for the
/// per-chunk substreams of parallel loops.
class RngStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RngStream(std::uint64_t seed = 0x5eed, std::uint32_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint32_t stream_id() const { return stream_id_; }

  /// Child stream sharing this seed with a different id.
  RngStream substream(std::uint32_t id) const { return RngStream(seed_, id); }

  engine_type& engine() { return engine_; }

  /// Uniform on [0, 1).
  double uniform();

 private:
  std::uint64_t seed_;
  std::uint32_t stream_id_;
  engine_type engine_;
};

// ---------------------------------------------------------------------------
// Worker pool configuration
// ---------------------------------------------------------------------------

/// Worker count used when an operation is not given one explicitly.
/// Initialised from CONJDIST_THREADS, else hardware concurrency.
unsigned default_threads();
void set_default_threads(unsigned threads);

/// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
/// Chunks are assigned statically so results are independent of scheduling
/// as long as the caller merges per-chunk outputs in chunk order.
void parallel_chunks(std::size_t chunks, unsigned threads,
                     const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  /// False when the budget ran out before the tolerance was met.
  bool converged = true;
};

/// Domain of one integration axis. Bounded axes are mapped affinely from the
/// unit interval; real axes use t = center + scale * tan(pi (u - 1/2)),
/// which turns algebraic tails like 1/t^2 into bounded integrands. Half-line
/// axes [lo, inf) and (-inf, hi] use t = lo + scale * tan(pi u / 2) and its
/// mirror image.
struct Axis {
  enum class Kind { Bounded, Real, LowerBounded, UpperBounded };
  Kind kind = Kind::Real;
  double lo = 0.0;
  double hi = 1.0;
  double center = 0.0;
  double scale = 1.0;

  static Axis bounded(double lo, double hi) { return {Kind::Bounded, lo, hi, 0.0, 1.0}; }
  static Axis real(double center = 0.0, double scale = 1.0) {
    return {Kind::Real, 0.0, 1.0, center, scale};
  }
  static Axis from(double lo, double scale = 1.0) { return {Kind::LowerBounded, lo, 0.0, 0.0, scale}; }
  static Axis upto(double hi, double scale = 1.0) { return {Kind::UpperBounded, 0.0, hi, 0.0, scale}; }
  /// Picks the axis kind matching [lo, hi], either end possibly infinite.
  static Axis interval(double lo, double hi, double scale = 1.0);
};

struct Integrand {
  std::function<double(std::span<const double>)> f;
  std::vector<Axis> axes;
  /// The integrand is a smooth function times an indicator of its support.
  /// The adaptive engine then treats cells whose rule points straddle the
  /// support boundary as unresolved and keeps bisecting them.
  bool indicator_support = false;

  std::size_t dimension() const { return axes.size(); }
};

enum class IntegrationMode {
  Auto,         ///< adaptive for d <= 3, quasi-random otherwise
  Adaptive,     ///< Gauss-Kronrod (d = 1) / Genz-Malik (d >= 2) subdivision
  QuasiRandom,  ///< randomly shifted Sobol points
};

struct IntegrationOptions {
  IntegrationMode mode = IntegrationMode::Auto;
  /// Evaluation cap; 0 selects the mode default (2e6 adaptive, 1e6 quasi-random).
  std::size_t budget = 0;
  double abs_tol = 1e-9;
  double rel_tol = 1e-10;
  /// Independent random shifts used for the quasi-random error estimate.
  unsigned replicates = 16;
  /// 0 selects default_threads().
  unsigned threads = 0;
  /// Adaptive engine: cells per axis of the starting grid; 0 picks 8 in one
  /// dimension, 4 up to three, else 2.
  unsigned initial_cells = 0;
};

inline constexpr std::size_t kDefaultAdaptiveBudget = 2'000'000;
inline constexpr std::size_t kDefaultQuasiRandomBudget = 1'000'000;

/// Integrates f over the product of its axes. Deterministic given
/// (options, rng). Throws EvaluationError if f returns NaN.
IntegrationResult integrate(const Integrand& f, const IntegrationOptions& options = {},
                            RngStream rng = RngStream());

}  // namespace conjdist
