#include "conjdist/mcsim.hpp"

#include <cmath>
#include <iomanip>
#include <random>

namespace conjdist {

namespace {

RngStream chunk_stream(const RngStream& rng, std::uint64_t chunk) {
  // Distinct parents get disjoint id ranges as long as they are < 2^12 apart.
  return rng.substream(static_cast<std::uint32_t>((rng.stream_id() << 20) + chunk + 1));
}

// Runs per-draw work in fixed chunks and merges per-chunk accumulators in
// chunk order.
template <typename Acc, typename Draw>
Acc run_draws(std::uint64_t draws, unsigned threads, const RngStream& rng, const Acc& zero,
              Draw&& draw) {
  const std::uint64_t chunks = (draws + kDrawChunk - 1) / kDrawChunk;
  std::vector<Acc> partial(chunks, zero);
  parallel_chunks(chunks, threads ? threads : default_threads(), [&](std::size_t c) {
    RngStream s = chunk_stream(rng, c);
    const std::uint64_t begin = c * kDrawChunk;
    const std::uint64_t end = std::min(draws, begin + kDrawChunk);
    for (std::uint64_t i = begin; i < end; ++i) draw(partial[c], s);
  });
  Acc total = zero;
  for (const Acc& a : partial) total += a;
  return total;
}

// Sums and sums of squares of a vector of per-draw statistics.
struct Moments {
  Eigen::ArrayXd sum;
  Eigen::ArrayXd sum_sq;
  std::uint64_t failures = 0;

  explicit Moments(Eigen::Index size = 0)
      : sum(Eigen::ArrayXd::Zero(size)), sum_sq(Eigen::ArrayXd::Zero(size)) {}
  Moments& operator+=(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    failures += o.failures;
    return *this;
  }
  void add(const Eigen::ArrayXd& x) {
    sum += x;
    sum_sq += x.square();
  }
  Estimate at(Eigen::Index i, std::uint64_t draws) const {
    const double N = static_cast<double>(draws);
    const double mean = sum(i) / N;
    const double var = std::max(0.0, sum_sq(i) / N - mean * mean);
    return {mean, std::sqrt(var / N)};
  }
};

bool sample_roots(const WeightedHeight& h, CoefficientSource source, RngStream& rng,
                  ClassifiedRoots& out) {
  try {
    out = sample_zeros(h, source, rng);
    return true;
  } catch (const RootFindingError&) {
    return false;
  }
}

std::vector<BinEstimate> bin_estimates(const Moments& m, const std::vector<Interval>& bins,
                                       std::uint64_t draws) {
  std::vector<BinEstimate> out;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const Estimate e = m.at(static_cast<Eigen::Index>(b), draws);
    const double len = bins[b].length();
    out.push_back({bins[b].lo, bins[b].hi, e.estimate / len, e.std_error / len});
  }
  return out;
}

Moments real_bin_moments(const WeightedHeight& h, const std::vector<Interval>& bins,
                         const McOptions& options, const RngStream& rng) {
  for (const Interval& I : bins)
    if (!I.bounded() || !(I.length() > 0.0)) throw DomainError("bins must be bounded, non-empty intervals");
  const Eigen::Index nb = static_cast<Eigen::Index>(bins.size());
  return run_draws(options.draws, options.threads, rng, Moments(nb), [&](Moments& acc, RngStream& s) {
    ClassifiedRoots r;
    if (!sample_roots(h, options.source, s, r)) {
      ++acc.failures;
      acc.add(Eigen::ArrayXd::Zero(nb));
      return;
    }
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(nb);
    for (double x : r.reals)
      for (Eigen::Index b = 0; b < nb; ++b)
        if (x >= bins[b].lo && x < bins[b].hi) counts(b) += 1.0;
    acc.add(counts);
  });
}

double z_score(double a, double sa, double b, double sb) {
  const double s = std::hypot(sa, sb);
  if (s == 0.0) return a == b ? 0.0 : std::copysign(INFINITY, a - b);
  return (a - b) / s;
}

}  // namespace

double sample_eta(PNorm p, RngStream& rng) {
  if (p.is_infinite()) return 2.0 * rng.uniform() - 1.0;
  std::gamma_distribution<double> g(1.0 / p.value(), 1.0);
  const double magnitude = std::pow(g(rng.engine()), 1.0 / p.value());
  return rng.uniform() < 0.5 ? -magnitude : magnitude;
}

RealPoly sample_G(const WeightedHeight& h, RngStream& rng) {
  const int n = h.degree();
  Eigen::VectorXd a(n + 1);
  for (int i = 0; i <= n; ++i) a(i) = sample_eta(h.p(), rng) / h.weights()(i);
  while (a(n) == 0.0) a(n) = sample_eta(h.p(), rng) / h.weights()(n);
  return RealPoly(std::move(a));
}

Eigen::VectorXd sample_uniform_ball(const WeightedHeight& h, RngStream& rng) {
  const int n = h.degree();
  const Eigen::VectorXd& w = h.weights();
  Eigen::VectorXd xi(n + 1);
  if (h.p().is_infinite()) {
    for (int i = 0; i <= n; ++i) xi(i) = (2.0 * rng.uniform() - 1.0) / w(i);
    return xi;
  }
  const double p = h.p().value();
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    xi(i) = sample_eta(h.p(), rng);
    s += std::pow(std::abs(xi(i)), p);
  }
  std::exponential_distribution<double> expo(1.0);
  s += expo(rng.engine());
  const double r = std::pow(s, -1.0 / p);
  for (int i = 0; i <= n; ++i) xi(i) *= r / w(i);
  return xi;
}

ClassifiedRoots sample_zeros(const WeightedHeight& h, CoefficientSource source, RngStream& rng) {
  if (source == CoefficientSource::G) return find_roots(sample_G(h, rng));
  Eigen::VectorXd a = sample_uniform_ball(h, rng);
  const int n = h.degree();
  while (a(n) == 0.0) a = sample_uniform_ball(h, rng);
  return find_roots(RealPoly(std::move(a)));
}

std::vector<BinEstimate> empirical_real_density(const WeightedHeight& h,
                                                const std::vector<Interval>& bins,
                                                const McOptions& options, RngStream rng) {
  return bin_estimates(real_bin_moments(h, bins, options, rng), bins, options.draws);
}

Estimate empirical_mixed_moment(const WeightedHeight& h, const std::vector<Interval>& reals,
                                const std::vector<UpperRect>& uppers, const McOptions& options,
                                RngStream rng) {
  Moments m = run_draws(options.draws, options.threads, rng, Moments(1), [&](Moments& acc, RngStream& s) {
    ClassifiedRoots r;
    Eigen::ArrayXd x = Eigen::ArrayXd::Zero(1);
    if (!sample_roots(h, options.source, s, r)) {
      ++acc.failures;
      acc.add(x);
      return;
    }
    double prod = 1.0;
    for (const Interval& I : reals) {
      int c = 0;
      for (double v : r.reals) c += I.contains(v);
      prod *= c;
    }
    for (const UpperRect& R : uppers) {
      int c = 0;
      for (const Complex& z : r.uppers) c += R.contains(z);
      prod *= c;
    }
    x(0) = prod;
    acc.add(x);
  });
  return m.at(0, options.draws);
}

std::vector<Estimate> empirical_real_count_dist(const WeightedHeight& h, const McOptions& options,
                                                RngStream rng) {
  const int n = h.degree();
  Moments m = run_draws(options.draws, options.threads, rng, Moments(n + 1), [&](Moments& acc, RngStream& s) {
    ClassifiedRoots r;
    Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n + 1);
    if (!sample_roots(h, options.source, s, r)) {
      ++acc.failures;
      acc.add(x);
      return;
    }
    x(static_cast<Eigen::Index>(r.reals.size())) = 1.0;
    acc.add(x);
  });
  std::vector<Estimate> out;
  for (int r = 0; r <= n; ++r) out.push_back(m.at(r, options.draws));
  return out;
}

std::vector<Interval> uniform_bins(double lo, double hi, int count) {
  if (!(hi > lo) || count < 1) throw DomainError("uniform_bins needs lo < hi and count >= 1");
  std::vector<Interval> bins;
  const double width = (hi - lo) / count;
  for (int b = 0; b < count; ++b)
    bins.push_back({lo + b * width, b + 1 == count ? hi : lo + (b + 1) * width});
  return bins;
}

EquivalenceReport ball_vs_G_root_equivalence(const WeightedHeight& h, std::uint64_t draws,
                                             RngStream rng, std::vector<Interval> bins,
                                             unsigned threads) {
  if (bins.empty()) bins = uniform_bins(-3.0, 3.0, 20);
  McOptions g{draws, CoefficientSource::G, threads};
  McOptions ball{draws, CoefficientSource::UniformBall, threads};
  const RngStream g_rng = rng.substream(rng.stream_id() * 2 + 1);
  const RngStream ball_rng = rng.substream(rng.stream_id() * 2 + 2);

  EquivalenceReport report;
  const auto g_counts = empirical_real_count_dist(h, g, g_rng);
  const auto b_counts = empirical_real_count_dist(h, ball, ball_rng);
  std::vector<double> all_z;
  for (std::size_t r = 0; r < g_counts.size(); ++r) {
    // Parity forbids some counts; both sides are then exactly zero.
    if (g_counts[r].estimate == 0.0 && b_counts[r].estimate == 0.0) {
      report.count_z.push_back(0.0);
      continue;
    }
    report.count_z.push_back(z_score(b_counts[r].estimate, b_counts[r].std_error,
                                     g_counts[r].estimate, g_counts[r].std_error));
    all_z.push_back(report.count_z.back());
  }
  report.g_bins = empirical_real_density(h, bins, g, g_rng.substream(g_rng.stream_id() + 1));
  report.ball_bins = empirical_real_density(h, bins, ball, ball_rng.substream(ball_rng.stream_id() + 1));
  for (std::size_t b = 0; b < bins.size(); ++b) {
    report.bin_z.push_back(z_score(report.ball_bins[b].estimate, report.ball_bins[b].std_error,
                                   report.g_bins[b].estimate, report.g_bins[b].std_error));
    all_z.push_back(report.bin_z.back());
  }
  report.pass = statistical_pass(all_z);
  return report;
}

bool statistical_pass(const std::vector<double>& z) {
  std::size_t over3 = 0;
  for (double v : z) {
    if (!(std::abs(v) <= 4.0)) return false;
    if (std::abs(v) > 3.0) ++over3;
  }
  return over3 <= (z.size() + 19) / 20;
}

void write_histogram_csv(std::ostream& out, const std::vector<BinEstimate>& bins,
                         const std::vector<double>& theory) {
  out << "bin_lo,bin_hi,estimate,std_error,theory,z\n" << std::setprecision(12);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const BinEstimate& e = bins[b];
    out << e.lo << ',' << e.hi << ',' << e.estimate << ',' << e.std_error << ',';
    if (b < theory.size()) {
      const double z = e.std_error > 0.0 ? (e.estimate - theory[b]) / e.std_error : 0.0;
      out << theory[b] << ',' << z;
    } else {
      out << "NA,NA";
    }
    out << '\n';
  }
}

}  // namespace conjdist
