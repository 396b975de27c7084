#include <algorithm>
#include <cmath>

#include "conjdist/numerics.hpp"
#include "conjdist/poly.hpp"
#include "conjdist/roots.hpp"
#include "doctest.h"

using namespace conjdist;

namespace {

PointSet points(std::initializer_list<Complex> z) {
  PointSet p(static_cast<Eigen::Index>(z.size()));
  Eigen::Index i = 0;
  for (const Complex& v : z) p(i++) = v;
  return p;
}

void check_vec(const Eigen::VectorXd& got, std::initializer_list<double> want) {
  REQUIRE(got.size() == static_cast<Eigen::Index>(want.size()));
  Eigen::Index i = 0;
  for (double w : want) CHECK(got(i++) == doctest::Approx(w).epsilon(1e-13));
}

RootConfiguration random_config(RngStream& rng, int k, int l) {
  RootConfiguration c;
  for (int i = 0; i < k; ++i) c.reals.push_back(4.0 * rng.uniform() - 2.0);
  for (int i = 0; i < l; ++i) c.uppers.emplace_back(4.0 * rng.uniform() - 2.0, 0.1 + 1.9 * rng.uniform());
  return c;
}

}  // namespace

TEST_CASE("elem_sym") {
  check_vec(elem_sym(points({1.0, -1.0})), {1, 0, -1});
  check_vec(elem_sym(points({Complex(0, 1), Complex(0, -1)})), {1, 0, 1});
  check_vec(elem_sym(points({2.0, Complex(1, 1), Complex(1, -1)})), {1, 4, 6, 4});
  CHECK_THROWS_AS(elem_sym(points({Complex(0, 1)})), DomainError);
}

TEST_CASE("vandermonde and discriminant") {
  CHECK(vandermonde_abs(points({5.0})) == 1.0);
  CHECK(vandermonde_abs(points({1.0, -1.0})) == doctest::Approx(2.0));
  CHECK(vandermonde_abs(points({0.0, 1.0, 2.0})) == doctest::Approx(2.0));
  CHECK(discriminant_from_roots(points({1.0, -1.0})) == doctest::Approx(4.0));
  CHECK(discriminant_from_roots(points({Complex(0, 1), Complex(0, -1)})) == doctest::Approx(-4.0));
  CHECK(discriminant_from_roots(points({0.0, 1.0, 2.0})) == doctest::Approx(4.0));
}

TEST_CASE("expand_monic") {
  check_vec(expand_monic({{1.0, -1.0}, {}}).coeffs(), {-1, 0, 1});
  check_vec(expand_monic({{}, {Complex(0, 1)}}).coeffs(), {1, 0, 1});
  check_vec(expand_monic({{2.0}, {Complex(1, 1)}}).coeffs(), {-4, 6, -4, 1});
}

TEST_CASE("evaluate and derivative") {
  const RealPoly q{-1.0, 0.0, 1.0};
  CHECK(evaluate(q, 2.0) == doctest::Approx(3.0));
  check_vec(derivative(q).coeffs(), {0, 2});
  const RealPoly r{1.0, 0.0, 1.0};
  CHECK(std::abs(evaluate(r, Complex(0, 1))) <= 1e-15);
  const IntPoly s{3, -2, 1};
  CHECK(evaluate(s, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("polynomial construction rejects a zero leading coefficient") {
  CHECK_THROWS_AS(RealPoly({1.0, 0.0}), DomainError);
  CHECK(multiply(IntPoly{1, 1}, IntPoly{-1, 1}) == IntPoly{-1, 0, 1});
}

TEST_CASE("discriminant magnitude is the squared Vandermonde") {
  RngStream rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = static_cast<int>(rng.uniform() * 4);
    const int l = static_cast<int>(rng.uniform() * 3);
    if (k + l == 0) continue;
    const PointSet p = random_config(rng, k, l).conjugate_closed();
    const double v = vandermonde_abs(p);
    CHECK(std::abs(std::abs(discriminant_from_roots(p)) - v * v) <= 1e-12 * v * v);
  }
}

TEST_CASE("Vieta: the expanded polynomial vanishes on its points") {
  RngStream rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const RootConfiguration c = random_config(rng, 1 + static_cast<int>(rng.uniform() * 3),
                                              static_cast<int>(rng.uniform() * 3));
    const RealPoly q = expand_monic(c);
    const double scale = 1.0 + q.coeffs().cwiseAbs().maxCoeff();
    const PointSet p = c.conjugate_closed();
    for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(std::abs(evaluate(q, p(i))) <= 1e-9 * scale);
  }
}

TEST_CASE("round trip through the root finder") {
  RngStream rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    RootConfiguration c = random_config(rng, static_cast<int>(rng.uniform() * 4),
                                        static_cast<int>(rng.uniform() * 3));
    if (c.k() + c.l() == 0) continue;
    const ClassifiedRoots r = find_roots(expand_monic(c));
    std::sort(c.reals.begin(), c.reals.end());
    std::sort(c.uppers.begin(), c.uppers.end(), [](Complex a, Complex b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    REQUIRE(r.reals.size() == c.reals.size());
    REQUIRE(r.uppers.size() == c.uppers.size());
    for (std::size_t i = 0; i < c.reals.size(); ++i) CHECK(std::abs(r.reals[i] - c.reals[i]) <= 1e-8);
    for (std::size_t i = 0; i < c.uppers.size(); ++i) CHECK(std::abs(r.uppers[i] - c.uppers[i]) <= 1e-8);
  }
}
