#include <cmath>
#include <sstream>

#include "conjdist/density.hpp"
#include "conjdist/mcsim.hpp"
#include "doctest.h"

using namespace conjdist;

namespace {

const PNorm inf = PNorm::infinity();

}  // namespace

TEST_CASE("coefficient sampler moments") {
  struct Case {
    PNorm p;
    double power;
    double expected;
  };
  // E|eta|^r = Gamma((r + 1) / p) / Gamma(1 / p).
  for (const Case& c : {Case{inf, 2, 1.0 / 3}, Case{PNorm::finite(2), 2, 0.5}, Case{PNorm::finite(1), 1, 1.0},
                        Case{PNorm::finite(3), 2, std::tgamma(1.0) / std::tgamma(1.0 / 3)}}) {
    RngStream rng(51);
    const int N = 400'000;
    double s = 0, s2 = 0, mean = 0;
    for (int i = 0; i < N; ++i) {
      const double t = sample_eta(c.p, rng);
      const double v = std::pow(std::abs(t), c.power);
      s += v;
      s2 += v * v;
      mean += t;
    }
    const double m = s / N;
    const double se = std::sqrt((s2 / N - m * m) / N);
    CHECK(std::abs(m - c.expected) <= 4 * se);
    CHECK(std::abs(mean / N) <= 0.01);
  }
}

TEST_CASE("sampler histogram matches the coefficient density") {
  for (PNorm p : {PNorm::finite(1), PNorm::finite(2), PNorm::finite(3), inf}) {
    const WeightedHeight h = WeightedHeight::unweighted(1, p);
    const CoefficientDensity f(h);
    const std::vector<Interval> bins = uniform_bins(-2.4, 2.4, 24);
    std::vector<std::uint64_t> counts(bins.size(), 0);
    RngStream rng(52);
    const std::uint64_t N = 10'000'000;
    for (std::uint64_t i = 0; i < N; ++i) {
      const double t = sample_eta(p, rng);
      const double pos = (t + 2.4) / 0.2;
      if (pos >= 0 && pos < 24) ++counts[static_cast<std::size_t>(pos)];
    }
    std::vector<double> z;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      // Bin probability by Simpson on 64 panels; f is smooth inside each bin
      // except at 0 and +-1, which are bin edges.
      const double lo = bins[b].lo, hi = bins[b].hi, dx = (hi - lo) / 64;
      double prob = 0;
      for (int j = 0; j < 64; ++j) {
        const double a = lo + j * dx, m = a + dx / 2, e = a + dx;
        const double fa = f(0, a + (j == 0 ? 1e-15 : 0)), fe = f(0, e - (j == 63 ? 1e-15 : 0));
        prob += dx / 6 * (fa + 4 * f(0, m) + fe);
      }
      const double expect = prob * N;
      const double sd = std::sqrt(expect * (1 - prob));
      if (sd == 0) {
        CHECK(counts[b] == 0);
        continue;
      }
      z.push_back((counts[b] - expect) / sd);
    }
    INFO("p = " << p.to_string());
    CHECK(statistical_pass(z));
  }
}

TEST_CASE("uniform ball points lie in the ball and fill it") {
  for (PNorm p : {PNorm::finite(1), PNorm::finite(2), PNorm::finite(3.5), inf}) {
    const WeightedHeight h = WeightedHeight::bombieri(3, p);
    RngStream rng(53);
    const int N = 100'000;
    int inner = 0;
    for (int i = 0; i < N; ++i) {
      const double r = lp_norm(h, sample_uniform_ball(h, rng));
      CHECK(r <= 1.0 + 1e-12);
      inner += r <= std::pow(0.5, 1.0 / 4);  // half the volume in R^4
    }
    const double f = static_cast<double>(inner) / N;
    CHECK(std::abs(f - 0.5) <= 4 * std::sqrt(0.25 / N));
  }
}

TEST_CASE("sampled polynomials have upper-half-plane zeros and full count") {
  RngStream rng(54);
  for (int i = 0; i < 2000; ++i) {
    const ClassifiedRoots r = sample_zeros(WeightedHeight::unweighted(4, PNorm::finite(2)),
                                           i % 2 ? CoefficientSource::G : CoefficientSource::UniformBall, rng);
    CHECK(r.count() == 4);
    for (const Complex& z : r.uppers) CHECK(z.imag() > 0);
  }
}

TEST_CASE("estimates are deterministic and thread independent") {
  const WeightedHeight h = WeightedHeight::unweighted(3, PNorm::finite(2));
  const std::vector<Interval> bins = uniform_bins(-2, 2, 8);
  McOptions a{30'000, CoefficientSource::G, 1};
  McOptions b{30'000, CoefficientSource::G, 3};
  const auto x = empirical_real_density(h, bins, a, RngStream(55, 2));
  const auto y = empirical_real_density(h, bins, b, RngStream(55, 2));
  const auto z = empirical_real_density(h, bins, a, RngStream(56, 2));
  bool differ = false;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    CHECK(x[i].estimate == y[i].estimate);
    CHECK(x[i].std_error == y[i].std_error);
    differ |= x[i].estimate != z[i].estimate;
  }
  CHECK(differ);
}

TEST_CASE("standard errors shrink like one over root N") {
  const WeightedHeight h = WeightedHeight::unweighted(2, inf);
  const McOptions small{40'000}, large{160'000};
  const Estimate a = empirical_mixed_moment(h, {{-1, 1}}, {}, small, RngStream(57));
  const Estimate b = empirical_mixed_moment(h, {{-1, 1}}, {}, large, RngStream(58));
  CHECK(a.std_error / b.std_error == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(a.estimate - b.estimate) <= 4 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("empirical real density matches the density evaluator") {
  const WeightedHeight h = WeightedHeight::bombieri(2, PNorm::finite(2));
  const std::vector<Interval> bins = uniform_bins(-3, 3, 12);
  const auto est = empirical_real_density(h, bins, {100'000}, RngStream(59));
  std::vector<double> z;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    // Oracle: the Edelman-Kostlan density integrates to atan.
    const double theory = std::sqrt(2.0) / M_PI * (std::atan(bins[b].hi) - std::atan(bins[b].lo)) / bins[b].length();
    z.push_back((est[b].estimate - theory) / est[b].std_error);
  }
  CHECK(statistical_pass(z));
}

TEST_CASE("real-count distribution sums to one") {
  const auto d = empirical_real_count_dist(WeightedHeight::unweighted(3, inf), {50'000}, RngStream(60));
  double s = 0;
  for (const Estimate& e : d) s += e.estimate;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d[0].estimate == 0.0);
  CHECK(d[2].estimate == 0.0);
}

TEST_CASE("ball and G zeros are equidistributed") {
  for (PNorm p : {PNorm::finite(2), inf}) {
    const EquivalenceReport r = ball_vs_G_root_equivalence(WeightedHeight::unweighted(2, p), 50'000, RngStream(61));
    CHECK(r.pass);
    CHECK(r.bin_z.size() == 20);
    CHECK(r.count_z.size() == 3);
  }
}

TEST_CASE("statistical pass rule") {
  CHECK(statistical_pass({0.5, -1.0, 2.9}));
  CHECK(statistical_pass({3.5, 0.0}));
  CHECK_FALSE(statistical_pass({3.5, -3.2}));
  CHECK_FALSE(statistical_pass({4.5}));
  std::vector<double> z(40, 0.0);
  z[0] = 3.5;
  z[1] = -3.9;
  CHECK(statistical_pass(z));
}

TEST_CASE("histogram csv") {
  std::ostringstream out;
  write_histogram_csv(out, {{0, 1, 0.5, 0.1}, {1, 2, 0.25, 0.0}}, {0.4});
  const std::string s = out.str();
  CHECK(s.rfind("bin_lo,bin_hi,estimate,std_error,theory,z\n", 0) == 0);
  CHECK(s.find("0.4,1") != std::string::npos);
  CHECK(s.find("NA,NA") != std::string::npos);
}
