#include "conjdist/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "conjdist/counting.hpp"
#include "conjdist/density.hpp"
#include "conjdist/lattice.hpp"
#include "conjdist/mcsim.hpp"

namespace conjdist {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool quick(const AcceptanceOptions& o) { return o.level == AcceptanceLevel::Quick; }

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED: " << what << "; ";
    }
  }
  void note(const std::string& what) { detail << what << "; "; }
};

WeightedHeight ones(int n, PNorm p) { return WeightedHeight::unweighted(n, p); }

// ---------------------------------------------------------------------------
// A1: Farey fractions, n = 1

void a1(const AcceptanceOptions& o, Check& c) {
  const double Q = 200;
  const auto h = ones(1, PNorm::infinity());
  const Region B = Region::real_interval(0.0, 1.0);
  const CountReport r = phi_count(h, Q, B, {o.threads});
  const double limit = limit_integral(h, B);
  const double farey = 3.0 / (pi * pi);
  const double ratio = static_cast<double>(r.phi) / (Q * Q);

  // Oracle: coprime pairs (b, a), 1 <= b <= Q, -b <= a <= 0, i.e. the
  // polynomials b z + a with a zero -a/b in [0, 1].
  std::uint64_t pairs = 0;
  for (std::int64_t b = 1; b <= Q; ++b)
    for (std::int64_t a = -b; a <= 0; ++a)
      if (std::gcd(a, b) == 1) ++pairs;

  c.note(fmt("Phi(200)=%llu coprime oracle=%llu ratio=%.6f limit=%.6f", (unsigned long long)r.phi,
             (unsigned long long)pairs, ratio, limit));
  c.require(r.phi == pairs, "count differs from the coprime-pair oracle");
  c.require(std::abs(limit - farey) <= 1e-9, "limit_integral differs from 3/pi^2");
  c.require(std::abs(ratio - farey) <= 0.02 * farey, "ratio not within 2% of 3/pi^2");
  c.require(r.root_failures == 0, "root-finder failures");
}

// ---------------------------------------------------------------------------
// A2: n = 2 convergence with the log Q / Q envelope

void a2(const AcceptanceOptions& o, Check& c) {
  const auto h = ones(2, PNorm::infinity());
  const Region B = Region::real_interval(0.0, 1.0);
  const std::vector<double> Qs = quick(o) ? std::vector<double>{10, 20, 30}
                                          : std::vector<double>{10, 20, 30, 40, 50};
  const ConvergenceTable t = convergence_table(h, B, Qs, {o.threads});
  const ConvergenceRow& last = t.rows.back();
  std::ostringstream rows;
  double cmin = INFINITY, cmax = 0.0;
  std::uint64_t failures = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const ConvergenceRow& r = t.rows[i];
    rows << fmt("Q=%g dev=%+.4f C=%.3f ", r.Q, r.deviation, r.envelope_constant);
    failures += r.root_failures;
    if (i == 0) continue;  // the tail: every Q but the smallest
    cmin = std::min(cmin, r.envelope_constant);
    cmax = std::max(cmax, r.envelope_constant);
  }
  c.note(fmt("limit=%.8f", t.limit) + " " + rows.str());
  c.require(std::abs(last.deviation) <= 0.05,
            fmt("ratio at Q=%g not within 5%% of the limit", last.Q));
  c.require(cmax <= 2.0 * cmin, fmt("envelope constant varies by %.2fx over the tail", cmax / cmin));
  c.require(failures == 0, "root-finder failures");

  // Near-axis classification: a ten times looser real tolerance must not
  // change the count.
  const CountReport loose = phi_count(h, last.Q, B, {o.threads, 10.0 * kDefaultRealTolerance});
  c.require(loose.phi == last.phi, "count changes with real_tol x 10");
}

// ---------------------------------------------------------------------------
// A3: closed form vs direct quadrature on the top stratum

void a3(const AcceptanceOptions& o, Check& c) {
  const int configs = quick(o) ? 5 : 20;
  RngStream rng(o.seed, 3);
  int evaluated = 0, failed = 0;
  double worst_excess = -INFINITY;
  std::string first_failure;
  for (int n = 1; n <= 3; ++n)
    for (int l = 0; 2 * l <= n; ++l) {
      const int k = n - 2 * l;
      for (PNorm p : {PNorm::finite(1), PNorm::finite(2), PNorm::infinity()})
        for (bool bombieri : {false, true}) {
          const WeightedHeight h = bombieri ? WeightedHeight::bombieri(n, p) : ones(n, p);
          for (int i = 0; i < configs; ++i) {
            DensityQuery q{h, {}};
            for (int j = 0; j < k; ++j) q.config.reals.push_back(-2.0 + 4.0 * rng.uniform());
            for (int j = 0; j < l; ++j)
              q.config.uppers.emplace_back(-2.0 + 4.0 * rng.uniform(), 0.1 + 1.9 * rng.uniform());
            const double closed = rho_closed_top(q);
            const IntegrationResult g = rho_general(q);
            const double diff = std::abs(g.value - closed);
            const double allowed = std::max(1e-6, 3.0 * g.error_estimate);
            worst_excess = std::max(worst_excess, diff - allowed);
            ++evaluated;
            if (diff > allowed) {
              ++failed;
              if (first_failure.empty())
                first_failure = fmt("n=%d k=%d l=%d p=%s w=%s diff=%.3g", n, k, l,
                                    p.to_string().c_str(), bombieri ? "bombieri" : "ones", diff);
            }
          }
        }
    }
  c.note(fmt("%d configurations, %d outside max(1e-6, 3 err)", evaluated, failed));
  c.require(failed == 0, first_failure);
}

// ---------------------------------------------------------------------------
// A4: Edelman-Kostlan

void a4(const AcceptanceOptions&, Check& c) {
  for (int n : {2, 3}) {
    const auto h = WeightedHeight::bombieri(n, PNorm::finite(2));
    for (double x : {0.0, 0.5, 1.0, 2.0}) {
      const IntegrationResult g = rho_general({h, {{x}, {}}});
      const double ek = std::sqrt(static_cast<double>(n)) / (pi * (1.0 + x * x));
      const double rel = std::abs(g.value - ek) / ek;
      c.note(fmt("n=%d x=%g rel=%.1e", n, x, rel));
      c.require(rel <= 1e-3, fmt("n=%d x=%g off by relative %.3g", n, x, rel));
    }
  }
}

// ---------------------------------------------------------------------------
// A5: empirical real-zero density, both coefficient laws, against density

void a5(const AcceptanceOptions& o, Check& c) {
  const std::uint64_t draws = quick(o) ? 20'000 : 100'000;
  const std::vector<Interval> bins = uniform_bins(-3.0, 3.0, 20);
  std::uint32_t stream = 50;
  for (PNorm p : {PNorm::finite(2), PNorm::infinity()}) {
    const auto h = ones(2, p);
    std::vector<double> theory;
    for (const Interval& I : bins)
      theory.push_back(integrate_rho(h, Region::real_interval(I.lo, I.hi)).value / I.length());
    for (CoefficientSource src : {CoefficientSource::G, CoefficientSource::UniformBall}) {
      const auto est = empirical_real_density(h, bins, {draws, src, o.threads}, RngStream(o.seed, ++stream));
      std::vector<double> z;
      double zmax = 0.0;
      for (std::size_t b = 0; b < bins.size(); ++b) {
        z.push_back((est[b].estimate - theory[b]) / est[b].std_error);
        zmax = std::max(zmax, std::abs(z.back()));
      }
      const char* name = src == CoefficientSource::G ? "G" : "ball";
      c.note(fmt("p=%s %s max|z|=%.2f", p.to_string().c_str(), name, zmax));
      c.require(statistical_pass(z), fmt("p=%s %s bins off", p.to_string().c_str(), name));
    }
  }
}

// ---------------------------------------------------------------------------
// A6: probability of n - 2l real zeros

void a6(const AcceptanceOptions& o, Check& c) {
  const std::uint64_t draws = quick(o) ? 200'000 : 1'000'000;
  const auto h = ones(2, PNorm::infinity());
  const IntegrationResult P = prob_real_count(h, 0, {}, RngStream(o.seed, 60));
  const auto mc = empirical_real_count_dist(h, {draws, CoefficientSource::G, o.threads}, RngStream(o.seed, 61));
  const double freq = mc[2].estimate;
  const double hand = 0.5 + 5.0 / 72.0 + std::log(2.0) / 12.0;
  c.note(fmt("P=%.6f+-%.1e MC=%.6f+-%.1e hand=%.6f", P.value, P.error_estimate, freq,
             mc[2].std_error, hand));
  c.require(std::abs(P.value - freq) <= 0.01 * freq, "quadrature not within 1% of Monte Carlo");
  c.require(std::abs(P.value - 0.627) <= 0.005 && std::abs(freq - 0.627) <= 0.005,
            "values do not bracket 0.627 +- 0.005");

  std::uint32_t stream = 62;
  for (int n : {2, 3})
    for (PNorm p : {PNorm::finite(2), PNorm::infinity()}) {
      const auto hn = ones(n, p);
      double sum = 0.0, var = 0.0;
      for (int l = 0; 2 * l <= n; ++l) {
        const IntegrationResult r = prob_real_count(hn, l, {}, RngStream(o.seed, ++stream));
        sum += r.value;
        var += r.error_estimate * r.error_estimate;
      }
      const double combined = std::sqrt(var);
      c.note(fmt("n=%d p=%s sum=%.6f+-%.1e", n, p.to_string().c_str(), sum, combined));
      c.require(std::abs(sum - 1.0) <= 3.0 * combined,
                fmt("n=%d p=%s probabilities do not sum to 1", n, p.to_string().c_str()));
    }
}

// ---------------------------------------------------------------------------
// A7: primitive lattice points

void a7(const AcceptanceOptions& o, Check& c) {
  for (int d : {2, 3}) {
    const CoprimeCount cc =
        count_coprime_points(LatticeRegion::cube(d, -1.0, 1.0), 100.0, CoprimeMethod::Both, o.threads);
    const double expected = std::ldexp(1.0, d) / zeta(d);
    const double ratio = static_cast<double>(cc.value) / std::pow(100.0, d);
    c.note(fmt("d=%d count=%llu ratio=%.5f expected=%.5f", d, (unsigned long long)cc.value, ratio,
               expected));
    c.require(cc.direct && *cc.direct == cc.mobius, fmt("d=%d direct and Moebius counts differ", d));
    c.require(std::abs(ratio - expected) <= 0.02 * expected, fmt("d=%d not within 2%%", d));
  }
}

// ---------------------------------------------------------------------------
// A8: ball volumes by hit rate

void a8(const AcceptanceOptions& o, Check& c) {
  const std::uint64_t points = quick(o) ? 200'000 : 1'000'000;
  struct Case {
    int n;
    PNorm p;
    bool bombieri;
  };
  const Case cases[] = {{2, PNorm::finite(2), false},
                        {2, PNorm::infinity(), false},
                        {3, PNorm::finite(1), false},
                        {2, PNorm::finite(2), true}};
  std::uint32_t stream = 80;
  for (const Case& k : cases) {
    const WeightedHeight h = k.bombieri ? WeightedHeight::bombieri(k.n, k.p) : ones(k.n, k.p);
    RngStream rng(o.seed, ++stream);
    const Eigen::VectorXd half = h.weights().cwiseInverse();
    Eigen::VectorXd v(k.n + 1);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < points; ++i) {
      for (int j = 0; j <= k.n; ++j) v(j) = (2.0 * rng.uniform() - 1.0) * half(j);
      if (lp_norm(h, v) <= 1.0) ++hits;
    }
    const double box = std::ldexp(half.prod(), k.n + 1);
    const double f = static_cast<double>(hits) / points;
    const double est = box * f;
    const double se = box * std::sqrt(f * (1.0 - f) / points);
    const double exact = ball_volume(h);
    // The box is the ball itself for p = inf: every point hits and se = 0.
    const double z = se > 0.0 ? (est - exact) / se : (est == exact ? 0.0 : INFINITY);
    c.note(fmt("n=%d p=%s %s vol=%.5f mc=%.5f z=%.2f", k.n, k.p.to_string().c_str(),
               k.bombieri ? "bombieri" : "ones", exact, est, z));
    c.require(std::abs(est - exact) <= 3.0 * se, "hit-rate volume outside 3 standard errors");
  }
}

// ---------------------------------------------------------------------------
// A9: rho_{0,1} = 2 rho_2(z, conj z), rho_{2,0} = rho_2, and the mixed moments

void a9(const AcceptanceOptions& o, Check& c) {
  const std::uint64_t draws = quick(o) ? 50'000 : 200'000;
  const auto h = ones(2, PNorm::finite(2));

  // The identities themselves, at a few points.
  double worst = 0.0;
  for (const Complex z : {Complex(0.3, 0.4), Complex(-1.2, 0.9)}) {
    PointSet pts(2);
    pts << z, std::conj(z);
    const double a = rho_general({h, {{}, {z}}}).value;
    const double b = 2.0 * rho_m(h, pts).value;
    worst = std::max(worst, std::abs(a - b));
  }
  for (const auto& xy : {std::pair{-0.5, 0.7}, std::pair{1.5, 0.2}}) {
    PointSet pts(2);
    pts << xy.first, xy.second;
    const double a = rho_general({h, {{xy.first, xy.second}, {}}}).value;
    const double b = rho_m(h, pts).value;
    worst = std::max(worst, std::abs(a - b));
  }
  c.require(worst <= 1e-12, "correlation identities do not hold");

  std::vector<double> z;
  std::uint32_t stream = 90;
  const std::vector<std::pair<Interval, Interval>> pairs = {
      {{-1.5, -0.5}, {0.0, 1.0}}, {{-0.5, 0.5}, {1.0, 2.5}}, {{0.25, 2.0}, {-2.0, -0.25}}};
  for (const auto& [I, J] : pairs) {
    Region B{2, 0, {RegionBox{{I, J}, {}}}};
    const double theory = integrate_rho(h, B).value;
    const Estimate e = empirical_mixed_moment(h, {I, J}, {}, {draws, CoefficientSource::G, o.threads},
                                              RngStream(o.seed, ++stream));
    z.push_back((e.estimate - theory) / e.std_error);
    c.note(fmt("real pair theory=%.5f mc=%.5f z=%.2f", theory, e.estimate, z.back()));
  }
  const std::vector<UpperRect> rects = {
      {{-1.0, 0.0}, {0.0, 1.0}}, {{0.0, 1.0}, {0.5, 1.5}}, {{-2.0, 2.0}, {1.0, 3.0}}};
  for (const UpperRect& R : rects) {
    Region B{0, 1, {RegionBox{{}, {R}}}};
    const double theory = integrate_rho(h, B).value;
    const Estimate e = empirical_mixed_moment(h, {}, {R}, {draws, CoefficientSource::G, o.threads},
                                              RngStream(o.seed, ++stream));
    z.push_back((e.estimate - theory) / e.std_error);
    c.note(fmt("rectangle theory=%.5f mc=%.5f z=%.2f", theory, e.estimate, z.back()));
  }
  bool within3 = true;
  for (double v : z) within3 = within3 && std::abs(v) <= 3.0;
  c.require(within3, "mixed moment outside 3 sigma");
}

struct CriterionEntry {
  void (*run)(const AcceptanceOptions&, Check&);
  double time_limit;
};

constexpr CriterionEntry kCriteria[kCriterionCount] = {
    {a1, 5.0}, {a2, 600.0}, {a3, 300.0}, {a4, 120.0}, {a5, 120.0},
    {a6, 300.0}, {a7, 60.0}, {a8, 60.0}, {a9, 120.0},
};

}  // namespace

CriterionResult run_criterion(int index, const AcceptanceOptions& options) {
  if (index < 1 || index > kCriterionCount) throw DomainError("criterion index must be 1..9");
  CriterionResult r;
  r.id = "A" + std::to_string(index);
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    kCriteria[index - 1].run(options, c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(r.seconds < kCriteria[index - 1].time_limit,
            fmt("runtime %.1f s over the %.0f s limit", r.seconds, kCriteria[index - 1].time_limit));
  r.pass = c.pass;
  r.detail = c.detail.str();
  if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
  return r;
}

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options, const std::function<void(const CriterionResult&)>& report) {
  std::vector<CriterionResult> out;
  for (int i = 1; i <= kCriterionCount; ++i) {
    out.push_back(run_criterion(i, options));
    if (report) report(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("%s %s (%.1f s) ", r.id.c_str(), r.pass ? "PASS" : "FAIL", r.seconds) + r.detail;
}

}  // namespace conjdist
