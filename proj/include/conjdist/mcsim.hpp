#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "conjdist/heights.hpp"
#include "conjdist/numerics.hpp"
#include "conjdist/region.hpp"
#include "conjdist/roots.hpp"

namespace conjdist {

/// Draws with density e^{-|t|^p} / (2 Gamma(1 + 1/p)); uniform on [-1, 1]
/// for p = inf. |t|^p is Gamma(1/p, 1) distributed.
double sample_eta(PNorm p, RngStream& rng);

/// G(z) = sum eta_k / w_k z^k. A zero leading coefficient is redrawn.
RealPoly sample_G(const WeightedHeight& h, RngStream& rng);

/// A point uniform on the weighted unit ball: for finite p,
/// (eta_i / w_i) / (sum |eta_j|^p + Z)^{1/p} with Z ~ Exp(1); for p = inf,
/// independent uniforms on [-1/w_i, 1/w_i].
Eigen::VectorXd sample_uniform_ball(const WeightedHeight& h, RngStream& rng);

enum class CoefficientSource { G, UniformBall };

/// Zeros of one polynomial draw from the chosen source.
ClassifiedRoots sample_zeros(const WeightedHeight& h, CoefficientSource source, RngStream& rng);

struct McOptions {
  std::uint64_t draws = 100'000;
  CoefficientSource source = CoefficientSource::G;
  unsigned threads = 0;  ///< 0: default_threads()
};

/// Draws are processed in fixed chunks of this size, chunk c using substream
/// c of the caller's stream, so results do not depend on the thread count.
inline constexpr std::uint64_t kDrawChunk = 4096;

struct BinEstimate {
  double lo = 0.0;
  double hi = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Mean number of real zeros per unit length in each bin.
std::vector<BinEstimate> empirical_real_density(const WeightedHeight& h,
                                                const std::vector<Interval>& bins,
                                                const McOptions& options, RngStream rng);

/// E[prod_i mu(B_i)] for disjoint real intervals followed by disjoint upper
/// rectangles.
Estimate empirical_mixed_moment(const WeightedHeight& h, const std::vector<Interval>& reals,
                                const std::vector<UpperRect>& uppers, const McOptions& options,
                                RngStream rng);

/// Entry r: frequency of exactly r real zeros (r = 0..n), binomial errors.
std::vector<Estimate> empirical_real_count_dist(const WeightedHeight& h, const McOptions& options,
                                                RngStream rng);

struct EquivalenceReport {
  std::vector<double> count_z;  ///< per real-zero count r = 0..n
  std::vector<BinEstimate> ball_bins;
  std::vector<BinEstimate> g_bins;
  std::vector<double> bin_z;
  bool pass = false;
};

/// Compares the zeros of uniform-ball coefficient vectors with those of G:
/// real-zero count frequencies and binned real-zero densities, as z-scores.
/// Default bins: 20 equal bins on [-3, 3].
EquivalenceReport ball_vs_G_root_equivalence(const WeightedHeight& h, std::uint64_t draws,
                                             RngStream rng, std::vector<Interval> bins = {},
                                             unsigned threads = 0);

/// Equal-width bins covering [lo, hi].
std::vector<Interval> uniform_bins(double lo, double hi, int count);

/// The family-wise rule used for statistical comparisons: every |z| <= 4,
/// and at most one |z| > 3 per started group of 20 comparisons.
bool statistical_pass(const std::vector<double>& z);

/// Columns bin_lo, bin_hi, estimate, std_error, theory, z.
void write_histogram_csv(std::ostream& out, const std::vector<BinEstimate>& bins,
                         const std::vector<double>& theory);

}  // namespace conjdist
