#include <cmath>

#include "conjdist/numerics.hpp"
#include "conjdist/poly.hpp"
#include "conjdist/roots.hpp"
#include "doctest.h"

using namespace conjdist;

TEST_CASE("roots of small examples") {
  ClassifiedRoots r = find_roots(RealPoly{-1.0, 0.0, 1.0});
  REQUIRE(r.reals.size() == 2);
  CHECK(r.reals[0] == doctest::Approx(-1.0));
  CHECK(r.reals[1] == doctest::Approx(1.0));
  CHECK(r.uppers.empty());

  r = find_roots(RealPoly{1.0, 0.0, 1.0});
  CHECK(r.reals.empty());
  REQUIRE(r.uppers.size() == 1);
  CHECK(std::abs(r.uppers[0] - Complex(0, 1)) <= 1e-12);

  // (z - 2)(z^2 - 2z + 2); the quadratic formula gives 1 +- i.
  r = find_roots(RealPoly{-4.0, 6.0, -4.0, 1.0});
  REQUIRE(r.reals.size() == 1);
  CHECK(r.reals[0] == doctest::Approx(2.0));
  REQUIRE(r.uppers.size() == 1);
  CHECK(std::abs(r.uppers[0] - Complex(1, 1)) <= 1e-12);
}

TEST_CASE("degree one and scaling of the leading coefficient") {
  ClassifiedRoots r = find_roots(RealPoly{3.0, -6.0});
  REQUIRE(r.reals.size() == 1);
  CHECK(r.reals[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(find_roots(RealPoly{1.0}), DomainError);
}

TEST_CASE("double root is reported as real") {
  const ClassifiedRoots r = find_roots(RealPoly{1.0, -2.0, 1.0});
  CHECK(r.count() == 2);
  for (double x : r.reals) CHECK(x == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("random integer polynomials: residual, count and conjugate closure") {
  RngStream rng(21);
  for (int trial = 0; trial < 10'000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 5);
    Eigen::VectorXd a(n + 1);
    for (int i = 0; i <= n; ++i) a(i) = std::floor(rng.uniform() * 101) - 50;
    while (a(n) == 0.0) a(n) = std::floor(rng.uniform() * 101) - 50;
    const RealPoly q(a);
    const ClassifiedRoots r = find_roots(q);
    REQUIRE(r.count() == n);
    const double l1 = a.cwiseAbs().sum();
    for (double x : r.reals)
      CHECK(std::abs(evaluate(q, x)) <= 1e-8 * l1 * std::pow(std::max(1.0, std::abs(x)), n));
    for (const Complex& z : r.uppers) {
      CHECK(z.imag() > 0.0);
      CHECK(std::abs(evaluate(q, z)) <= 1e-8 * l1 * std::pow(std::max(1.0, std::abs(z)), n));
    }
    // Re-expansion recovers the coefficients. Repeated roots (a_0 = 0 twice,
    // squares) lose accuracy like sqrt(eps) and are skipped here.
    if (discriminant_from_roots(RootConfiguration{r.reals, r.uppers}.conjugate_closed()) == 0.0) continue;
    const Eigen::VectorXd back = a(n) * expand_monic({r.reals, r.uppers}).coeffs();
    const double scale = a.cwiseAbs().maxCoeff();
    bool simple = true;
    const PointSet p = RootConfiguration{r.reals, r.uppers}.conjugate_closed();
    for (Eigen::Index i = 0; i < p.size(); ++i)
      for (Eigen::Index j = i + 1; j < p.size(); ++j) simple &= std::abs(p(i) - p(j)) > 1e-4;
    if (simple) CHECK((back - a).cwiseAbs().maxCoeff() <= 1e-7 * scale);
  }
}

TEST_CASE("output ordering is canonical") {
  const ClassifiedRoots r = find_roots(expand_monic({{3.0, -1.0, 0.5}, {Complex(1, 2), Complex(-1, 1)}}));
  REQUIRE(r.reals.size() == 3);
  CHECK(r.reals[0] < r.reals[1]);
  CHECK(r.reals[1] < r.reals[2]);
  REQUIRE(r.uppers.size() == 2);
  CHECK(r.uppers[0].real() < r.uppers[1].real());
}
