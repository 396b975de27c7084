#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "conjdist/counting.hpp"
#include "conjdist/density.hpp"
#include "conjdist/intarith.hpp"
#include "doctest.h"

using namespace conjdist;

namespace {

const PNorm inf = PNorm::infinity();

std::uint64_t count_ball(const WeightedHeight& h, double Q) {
  std::uint64_t c = 0;
  enumerate_height_ball(h, Q, [&](const IntPoly&) { ++c; });
  return c;
}

Region interval_region(double lo, double hi) { return Region::real_interval(lo, hi); }

}  // namespace

TEST_CASE("height ball enumeration") {
  CHECK(count_ball(WeightedHeight::unweighted(1, inf), 1.0) == 6);
  CHECK(count_ball(WeightedHeight::unweighted(1, PNorm::finite(1)), 1.0) == 2);
  CHECK(count_ball(WeightedHeight::unweighted(2, inf), 1.0) == 18);

  // Oracle: brute force over the bounding box.
  for (PNorm p : {PNorm::finite(1), PNorm::finite(2), PNorm::finite(3), inf}) {
    const WeightedHeight h = WeightedHeight::bombieri(3, p);
    const double Q = 4.5;
    std::uint64_t brute = 0;
    const int R = static_cast<int>(std::floor(Q / h.weights().minCoeff()));
    Eigen::VectorXd a(4);
    for (int a0 = -R; a0 <= R; ++a0)
      for (int a1 = -R; a1 <= R; ++a1)
        for (int a2 = -R; a2 <= R; ++a2)
          for (int a3 = -R; a3 <= R; ++a3) {
            if (a3 == 0) continue;
            a << a0, a1, a2, a3;
            brute += lp_norm(h, a) <= Q * (1 + 1e-12);
          }
    CHECK(count_ball(h, Q) == brute);
  }
}

TEST_CASE("positive leading coefficients only") {
  std::uint64_t c = 0;
  enumerate_height_ball(WeightedHeight::unweighted(2, inf), 2.0, [&](const IntPoly& q) {
    CHECK(q.leading() > 0);
    ++c;
  }, true);
  CHECK(c == 2 * 25);
}

TEST_CASE("prime enumeration") {
  std::vector<IntPoly> primes;
  enumerate_prime(WeightedHeight::unweighted(1, inf), 1.0, [&](const IntPoly& q) { primes.push_back(q); });
  CHECK(primes.size() == 3);
  for (const IntPoly& q : primes) CHECK(q.leading() == 1);

  // Oracle: monic quadratics are reducible exactly when the discriminant is a square.
  std::uint64_t oracle = 0;
  for (int b = -1; b <= 1; ++b)
    for (int c = -1; c <= 1; ++c) {
      const int D = b * b - 4 * c;
      const int s = D >= 0 ? static_cast<int>(std::lround(std::sqrt(D))) : -1;
      oracle += s * s != D;
    }
  std::uint64_t got = 0;
  enumerate_prime(WeightedHeight::unweighted(2, inf), 1.0, [&](const IntPoly& q) {
    CHECK(q.leading() > 0);
    ++got;
  });
  CHECK(got == oracle);

  // Degree one: the primes are the primitive a_1 z + a_0 with a_1 > 0.
  std::uint64_t primitive = 0;
  for (int a1 = 1; a1 <= 7; ++a1)
    for (int a0 = -7; a0 <= 7; ++a0) primitive += std::gcd(a1, std::abs(a0)) == 1;
  got = 0;
  enumerate_prime(WeightedHeight::unweighted(1, inf), 7.0, [&](const IntPoly&) { ++got; });
  CHECK(got == primitive);
}

TEST_CASE("phi examples") {
  const WeightedHeight h = WeightedHeight::unweighted(1, inf);
  CHECK(phi_count(h, 1.0, Region::whole_real_line()).phi == 3);
  CHECK(phi_count(h, 1.0, interval_region(0, 1)).phi == 2);

  // Quadratic-formula oracle for complex zeros in |Re z| <= 2, Im z <= 2.
  const WeightedHeight h2 = WeightedHeight::unweighted(2, inf);
  std::uint64_t oracle = 0;
  for (int b = -1; b <= 1; ++b)
    for (int c = -1; c <= 1; ++c) {
      const double D = b * b - 4.0 * c;
      if (D >= 0) continue;  // irreducible monic with real zeros have none in C_+
      const double re = -b / 2.0, im = std::sqrt(-D) / 2.0;
      oracle += std::abs(re) <= 2 && im <= 2;
    }
  CHECK(phi_count(h2, 1.0, Region::upper_rect(-2, 2, 0, 2)).phi == oracle);
  CHECK(oracle == 3);
}

TEST_CASE("tuples in a region are ordered and injective") {
  ClassifiedRoots r;
  r.reals = {0.0, 1.0, 2.0};
  r.uppers = {Complex(0, 1)};
  Region B;
  B.k = 2;
  B.boxes.push_back({{{0, 1.5}, {0, 1.5}}, {}});
  CHECK(tuples_in_region(r, B) == 2);
  B.boxes[0].reals[1] = {-1, 3};
  CHECK(tuples_in_region(r, B) == 4);
  Region C;
  C.k = 1;
  C.l = 1;
  C.boxes.push_back({{{1.5, 3}}, {UpperRect{{-1, 1}, {0.5, 2}}}});
  CHECK(tuples_in_region(r, C) == 1);
}

TEST_CASE("exchange identity") {
  const WeightedHeight h = WeightedHeight::unweighted(2, inf);
  for (double Q : {2.0, 5.0, 10.0}) {
    for (const Region& B : {interval_region(-1, 1), Region::whole_real_line(), Region::upper_rect(-1, 1, 0, 1)}) {
      const CountReport r = phi_count(h, Q, B);
      std::uint64_t weighted = 0;
      for (const auto& [m, count] : r.multiplicity) weighted += m * count;
      CHECK(weighted == r.phi);
      // Oracle: sum mu_q(B) directly over the prime enumeration.
      std::uint64_t direct = 0;
      enumerate_prime(h, Q, [&](const IntPoly& q) { direct += tuples_in_region(find_roots(q.cast<double>()), B); });
      CHECK(direct == r.phi);
    }
  }
}

TEST_CASE("Farey oracle for the unit interval") {
  const WeightedHeight h = WeightedHeight::unweighted(1, inf);
  for (double Q : {10.0, 37.0, 100.0}) {
    std::uint64_t oracle = 0;
    for (int a1 = 1; a1 <= Q; ++a1)
      for (int a0 = -a1; a0 <= 0; ++a0) oracle += std::gcd(a1, -a0) == 1;
    CHECK(phi_count(h, Q, interval_region(0, 1)).phi == oracle);
  }
}

TEST_CASE("monotone in Q and additive over disjoint regions") {
  const WeightedHeight h = WeightedHeight::unweighted(2, PNorm::finite(2));
  const double cut = std::numbers::pi / 4;  // no algebraic zero sits on it
  std::uint64_t prev = 0;
  for (double Q : {2.0, 4.0, 6.0, 9.0}) {
    const std::uint64_t all = phi_count(h, Q, interval_region(-1, 2)).phi;
    CHECK(all >= prev);
    prev = all;
    const std::uint64_t a = phi_count(h, Q, interval_region(-1, cut)).phi;
    const std::uint64_t b = phi_count(h, Q, interval_region(cut, 2)).phi;
    CHECK(a + b == all);
    Region both;
    both.k = 1;
    both.boxes = {{{{-1, cut}}, {}}, {{{cut + 0.5, 2}}, {}}};
    CHECK(phi_count(h, Q, both).phi == a + phi_count(h, Q, interval_region(cut + 0.5, 2)).phi);
  }
}

TEST_CASE("mirrored rectangles give equal counts") {
  for (int n : {2, 3}) {
    const WeightedHeight h = WeightedHeight::unweighted(n, PNorm::finite(2));
    const UpperRect R{{0.2, 1.5}, {0.1, 2.0}};
    Region B;
    B.l = 1;
    B.boxes = {{{}, {R}}};
    Region M = B;
    M.boxes[0].uppers[0] = R.mirrored();
    for (double Q : {3.0, 8.0}) CHECK(phi_count(h, Q, B).phi == phi_count(h, Q, M).phi);
  }
}

TEST_CASE("reducible census stays within its envelope") {
  for (int n : {2, 3}) {
    const WeightedHeight h = WeightedHeight::unweighted(n, inf);
    std::vector<double> scaled;
    for (double Q : {4.0, 8.0, 16.0}) {
      const CountReport r = phi_count(h, Q, Region::whole_real_line());
      scaled.push_back(r.reducible_count / (std::pow(Q, n) * (n == 2 ? std::log(Q) : 1.0)));
      // Oracle count of reducibles over the whole ball.
      if (Q == 4.0) {
        std::uint64_t red = 0;
        enumerate_height_ball(h, Q, [&](const IntPoly& q) { red += !is_irreducible(q); });
        CHECK(red == r.reducible_count);
      }
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi <= 2.0 * *lo);
  }
}

TEST_CASE("counts do not depend on the thread count") {
  const WeightedHeight h = WeightedHeight::unweighted(3, inf);
  CountOptions one{1}, many{4};
  const CountReport a = phi_count(h, 6.0, interval_region(-1, 1), one);
  const CountReport b = phi_count(h, 6.0, interval_region(-1, 1), many);
  CHECK(a.phi == b.phi);
  CHECK(a.reducible_count == b.reducible_count);
  CHECK(a.multiplicity == b.multiplicity);
}

TEST_CASE("limit values") {
  const double pi = std::numbers::pi;
  const WeightedHeight h = WeightedHeight::unweighted(1, inf);
  CHECK(limit_integral(h, interval_region(0, 1)) == doctest::Approx(3 / (pi * pi)).epsilon(1e-8));
  CHECK(limit_integral(h, Region::whole_real_line()) == doctest::Approx(12 / (pi * pi)).epsilon(1e-8));
}

TEST_CASE("convergence table") {
  const WeightedHeight h = WeightedHeight::unweighted(1, inf);
  const ConvergenceTable t = convergence_table(h, interval_region(0, 1), {50, 100, 200});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.chi == 0);
  for (const ConvergenceRow& r : t.rows) {
    CHECK(r.ratio == doctest::Approx(r.phi / (r.Q * r.Q)));
    CHECK(r.deviation == doctest::Approx((r.ratio - t.limit) / t.limit));
    CHECK(std::abs(r.deviation) < 0.1);
  }
  CHECK(rate_log_exponent(2, 0) == 1);
  CHECK(rate_log_exponent(2, 1) == 0);
  CHECK(rate_log_exponent(3, 0) == 0);

  WeightedHeight heavy(1, Eigen::Vector2d(3.0, 3.0), inf);
  CHECK(convergence_table(heavy, interval_region(0, 1), {1.0, 2.0}).rows.empty());

  std::ostringstream a, b;
  write_convergence_csv(a, t, false);
  write_convergence_csv(b, convergence_table(h, interval_region(0, 1), {50, 100, 200}), false);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("Q,phi,phi_over_Qn1,limit,deviation,reducible_count,runtime_s\n", 0) == 0);
}
