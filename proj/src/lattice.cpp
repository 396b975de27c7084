#include "conjdist/lattice.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "conjdist/numerics.hpp"

namespace conjdist {

namespace {

constexpr double kScanLimit = 2e10;
constexpr double kDirectLimit = 1e8;
// Closed regions: boundary points within this relative slack count as inside.
constexpr double kBoundarySlack = 1e-12;

class Scanner {
 public:
  Scanner(const LatticeRegion& region, double Q) : region_(region), Q_(Q) {
    if (!(Q > 0.0)) throw DomainError("dilation Q must be positive");
    if (region.dimension < 1) throw DomainError("region dimension must be >= 1");
    if (!region.contains && !region.ranges_exact)
      throw DomainError("region needs a membership predicate");
    extent_ = static_cast<std::int64_t>(std::ceil(Q * region.bound));
    const double volume = std::pow(2.0 * extent_ + 1.0, region.dimension -
                                                           (region.ranges_exact ? 1 : 0));
    if (volume > kScanLimit)
      throw ResourceError("lattice scan volume " + std::to_string(volume) + " exceeds limit",
                          volume);
  }

  std::int64_t extent() const { return extent_; }

  // Integer range of the next axis given the scaled prefix.
  std::pair<std::int64_t, std::int64_t> range(std::span<const double> prefix) const {
    if (!region_.axis_range) return {-extent_, extent_};
    const auto [lo, hi] = region_.axis_range(prefix);
    if (!(hi >= lo)) return {1, 0};
    const double slack = kBoundarySlack * (1.0 + Q_ * region_.bound);
    return {std::max(-extent_, static_cast<std::int64_t>(std::ceil(Q_ * lo - slack))),
            std::min(extent_, static_cast<std::int64_t>(std::floor(Q_ * hi + slack)))};
  }

  bool contains(std::span<const double> x) const { return region_.contains(x); }
  double Q() const { return Q_; }
  const LatticeRegion& region() const { return region_; }

 private:
  const LatticeRegion& region_;
  double Q_;
  std::int64_t extent_;
};

// Walks all integer points of QA whose first coordinate is `first`, calling
// visit(gcd_of_point, multiplicity). When the innermost axis is exact and
// only counts are needed, visit receives the whole range at once.
template <typename Visit>
void walk(const Scanner& s, std::int64_t first, bool need_gcd, Visit&& visit) {
  const int d = s.region().dimension;
  std::vector<double> x(d);
  std::vector<std::int64_t> g(d + 1, 0);
  const double inv_q = 1.0 / s.Q();

  auto recurse = [&](auto&& self, int axis, std::int64_t v) -> void {
    x[axis] = static_cast<double>(v) * inv_q;
    g[axis + 1] = std::gcd(g[axis], v < 0 ? -v : v);
    if (axis + 1 == d) {
      if (s.region().ranges_exact || s.contains(std::span<const double>(x.data(), d)))
        visit(g[d], std::uint64_t{1});
      return;
    }
    const auto [lo, hi] = s.range(std::span<const double>(x.data(), axis + 1));
    if (axis + 2 == d && s.region().ranges_exact && !need_gcd) {
      if (hi >= lo) visit(std::int64_t{-1}, static_cast<std::uint64_t>(hi - lo + 1));
      return;
    }
    for (std::int64_t w = lo; w <= hi; ++w) self(self, axis + 1, w);
  };

  const auto [lo, hi] = s.range({});
  if (first < lo || first > hi) return;
  recurse(recurse, 0, first);
}

std::uint64_t scan_count(const LatticeRegion& region, double Q, unsigned threads, bool coprime) {
  const Scanner s(region, Q);
  const std::int64_t E = s.extent();
  const std::size_t rows = static_cast<std::size_t>(2 * E + 1);
  std::vector<std::uint64_t> partial(rows, 0);
  parallel_chunks(rows, threads, [&](std::size_t r) {
    std::uint64_t c = 0;
    walk(s, static_cast<std::int64_t>(r) - E, coprime, [&](std::int64_t g, std::uint64_t m) {
      if (!coprime || g == 1) c += m;
    });
    partial[r] = c;
  });
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

bool origin_inside(const LatticeRegion& region) {
  std::vector<double> zero(region.dimension, 0.0);
  if (region.contains) return region.contains(zero);
  return true;
}

}  // namespace

LatticeRegion LatticeRegion::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.empty()) throw DomainError("box: bad bounds");
  LatticeRegion r;
  r.dimension = static_cast<int>(lo.size());
  r.bound = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i)
    r.bound = std::max({r.bound, std::abs(lo[i]), std::abs(hi[i])});
  r.contains = [lo, hi](std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double slack = kBoundarySlack * (1.0 + std::abs(x[i]));
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
  };
  r.axis_range = [lo, hi](std::span<const double> prefix) {
    return std::make_pair(lo[prefix.size()], hi[prefix.size()]);
  };
  r.ranges_exact = true;
  return r;
}

LatticeRegion LatticeRegion::cube(int d, double lo, double hi) {
  return box(std::vector<double>(d, lo), std::vector<double>(d, hi));
}

LatticeRegion LatticeRegion::lp_ball(int d, PNorm p) {
  LatticeRegion r;
  r.dimension = d;
  r.bound = 1.0;
  const double pv = p.value();
  const bool inf = p.is_infinite();
  r.contains = [pv, inf](std::span<const double> x) {
    double acc = 0.0;
    for (double xi : x) acc = inf ? std::max(acc, std::abs(xi)) : acc + std::pow(std::abs(xi), pv);
    return acc <= 1.0 + kBoundarySlack;
  };
  r.axis_range = [pv, inf](std::span<const double> prefix) {
    if (inf) return std::make_pair(-1.0, 1.0);
    double used = 0.0;
    for (double xi : prefix) used += std::pow(std::abs(xi), pv);
    if (used > 1.0 + kBoundarySlack) return std::make_pair(1.0, -1.0);
    const double rem = std::pow(std::max(0.0, 1.0 - used), 1.0 / pv);
    return std::make_pair(-rem, rem);
  };
  r.ranges_exact = true;
  return r;
}

std::uint64_t count_integer_points(const LatticeRegion& region, double Q, unsigned threads) {
  return scan_count(region, Q, threads, false);
}

int mobius(std::uint64_t k) {
  if (k == 0) throw DomainError("mobius: argument must be >= 1");
  int result = 1;
  for (std::uint64_t p = 2; p * p <= k; ++p) {
    if (k % p) continue;
    k /= p;
    if (k % p == 0) return 0;
    result = -result;
  }
  if (k > 1) result = -result;
  return result;
}

std::vector<int> mobius_table(std::uint64_t K) {
  std::vector<int> mu(K + 1, 1);
  std::vector<bool> composite(K + 1, false);
  std::vector<std::uint64_t> primes;
  if (K >= 1) mu[1] = 1;
  for (std::uint64_t i = 2; i <= K; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (std::uint64_t p : primes) {
      if (i * p > K) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

CoprimeCount count_coprime_points(const LatticeRegion& region, double Q, CoprimeMethod method,
                                  unsigned threads) {
  const double d = region.dimension;
  const double direct_volume = d * std::pow(2.0 * Q * region.bound, d);
  const bool run_direct = method == CoprimeMethod::Direct || method == CoprimeMethod::Both ||
                          (method == CoprimeMethod::Auto && direct_volume <= kDirectLimit);
  const bool run_mobius = method != CoprimeMethod::Direct;

  CoprimeCount out;
  if (run_direct) out.direct = scan_count(region, Q, threads, true);
  if (run_mobius) {
    // lambda*(QA) = sum_k mu(k) (lambda(Q/k A) - [0 in A]).
    const auto K = static_cast<std::uint64_t>(std::floor(Q * region.bound)) + 1;
    const std::vector<int> mu = mobius_table(K);
    const std::int64_t origin = origin_inside(region) ? 1 : 0;
    std::int64_t total = 0;
    for (std::uint64_t k = 1; k <= K; ++k) {
      if (mu[k] == 0) continue;
      const auto lam = static_cast<std::int64_t>(
          count_integer_points(region, Q / static_cast<double>(k), threads));
      total += mu[k] * (lam - origin);
    }
    out.mobius = static_cast<std::uint64_t>(total);
  }
  if (out.direct && run_mobius && *out.direct != out.mobius)
    throw std::logic_error("coprime count mismatch: direct " + std::to_string(*out.direct) +
                           " vs Moebius " + std::to_string(out.mobius));
  out.value = out.direct ? *out.direct : out.mobius;
  if (!run_mobius) out.mobius = out.value;
  return out;
}

}  // namespace conjdist
