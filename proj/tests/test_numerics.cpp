#include <cmath>
#include <numbers>

#include "conjdist/errors.hpp"
#include "conjdist/numerics.hpp"
#include "doctest.h"

using namespace conjdist;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gamma at simple points") {
  CHECK(conjdist::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(conjdist::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(conjdist::gamma(3.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(conjdist::gamma(0.0), DomainError);
  CHECK_THROWS_AS(conjdist::gamma(-1.5), DomainError);
}

TEST_CASE("gamma recurrence on a grid") {
  for (int i = 1; i <= 100; ++i) {
    const double x = 0.1 * i;
    CHECK(rel(conjdist::gamma(x + 1.0), x * conjdist::gamma(x)) <= 1e-12);
  }
}

TEST_CASE("zeta values") {
  const double pi = std::numbers::pi;
  CHECK(rel(conjdist::zeta(2), pi * pi / 6) <= 1e-13);
  CHECK(rel(conjdist::zeta(4), std::pow(pi, 4) / 90) <= 1e-13);
  CHECK(conjdist::zeta(3) == doctest::Approx(1.2020569032).epsilon(1e-10));
  // Independent oracle: direct partial sum with an integral tail correction.
  for (int s = 5; s <= 9; ++s) {
    double direct = 0.0;
    const int N = 2000;
    for (int k = N; k >= 1; --k) direct += std::pow(k, -s);
    direct += std::pow(N, 1 - s) / (s - 1) - 0.5 * std::pow(N, -s);
    CHECK(rel(conjdist::zeta(s), direct) <= 1e-13);
  }
  CHECK_THROWS_AS(conjdist::zeta(1), DomainError);
}

TEST_CASE("integrate: gaussian on the line") {
  Integrand f{[](std::span<const double> t) { return std::exp(-t[0] * t[0]); }, {Axis::real()}};
  const IntegrationResult r = integrate(f);
  CHECK(r.converged);
  CHECK(std::abs(r.value - std::sqrt(std::numbers::pi)) <= 1e-9);
  CHECK(std::abs(r.value - std::sqrt(std::numbers::pi)) <= std::max(3 * r.error_estimate, 1e-12));
}

TEST_CASE("integrate: two-sided exponential in the plane") {
  Integrand f{[](std::span<const double> t) { return std::exp(-std::abs(t[0]) - std::abs(t[1])); },
              {Axis::real(), Axis::real()}};
  IntegrationOptions o;
  o.rel_tol = 1e-8;
  const IntegrationResult r = integrate(f, o);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 4.0) <= 1e-6);
}

TEST_CASE("integrate: |t| exp(-t^2)") {
  Integrand f{[](std::span<const double> t) { return std::abs(t[0]) * std::exp(-t[0] * t[0]); },
              {Axis::real()}};
  const IntegrationResult r = integrate(f);
  CHECK(std::abs(r.value - 1.0) <= 1e-8);
}

TEST_CASE("integrate: half-line and bounded axes") {
  Integrand a{[](std::span<const double> t) { return std::exp(-t[0]); }, {Axis::from(0.0)}};
  CHECK(std::abs(integrate(a).value - 1.0) <= 1e-9);
  Integrand b{[](std::span<const double> t) { return std::exp(t[0]); }, {Axis::upto(0.0)}};
  CHECK(std::abs(integrate(b).value - 1.0) <= 1e-9);
  Integrand c{[](std::span<const double> t) { return t[0] * t[1] * t[2]; },
              {Axis::bounded(0, 1), Axis::bounded(0, 2), Axis::bounded(0, 3)}};
  CHECK(std::abs(integrate(c).value - 0.5 * 2 * 4.5) <= 1e-9);
}

TEST_CASE("integrate: indicator support") {
  Integrand f{[](std::span<const double> t) { return t[0] * t[0] + t[1] * t[1] <= 1.0 ? 1.0 : 0.0; },
              {Axis::bounded(-1, 1), Axis::bounded(-1, 1)},
              true};
  IntegrationOptions o;
  o.abs_tol = 1e-4;
  o.rel_tol = 1e-4;
  const IntegrationResult r = integrate(f, o);
  CHECK(std::abs(r.value - std::numbers::pi) <= 1e-3);
}

TEST_CASE("integrate: linearity on polynomial times gaussian") {
  RngStream rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    double cf[2][4];
    for (auto& row : cf)
      for (double& v : row) v = 2.0 * rng.uniform() - 1.0;
    const double a = 4.0 * rng.uniform() - 2.0;
    const double b = 4.0 * rng.uniform() - 2.0;
    auto make = [&](const double* c) {
      return [c](std::span<const double> t) {
        const double x = t[0];
        return (c[0] + x * (c[1] + x * (c[2] + x * c[3]))) * std::exp(-x * x);
      };
    };
    Integrand f{make(cf[0]), {Axis::real()}};
    Integrand g{make(cf[1]), {Axis::real()}};
    auto fg = [&](std::span<const double> t) { return a * f.f(t) + b * g.f(t); };
    Integrand h{fg, {Axis::real()}};
    const IntegrationResult rf = integrate(f), rg = integrate(g), rh = integrate(h);
    const double err = std::abs(a) * rf.error_estimate + std::abs(b) * rg.error_estimate + rh.error_estimate;
    CHECK(std::abs(rh.value - (a * rf.value + b * rg.value)) <= std::max(3 * err, 1e-12));
    // Oracle: moments of exp(-x^2) are sqrt(pi) and sqrt(pi)/2 for x^0 and x^2.
    const double sp = std::sqrt(std::numbers::pi);
    CHECK(std::abs(rf.value - (cf[0][0] * sp + cf[0][2] * sp / 2)) <= 1e-8);
  }
}

TEST_CASE("integrate: reproducible results") {
  Integrand f{[](std::span<const double> t) {
                return std::exp(-t[0] * t[0] - t[1] * t[1] - t[2] * t[2] - t[3] * t[3]);
              },
              {Axis::real(), Axis::real(), Axis::real(), Axis::real()}};
  IntegrationOptions o;
  o.mode = IntegrationMode::QuasiRandom;
  o.budget = 100'000;
  const IntegrationResult a = integrate(f, o, RngStream(11, 3));
  const IntegrationResult b = integrate(f, o, RngStream(11, 3));
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.evaluations == b.evaluations);
  CHECK(std::abs(a.value - std::pow(std::numbers::pi, 2)) <= 5 * a.error_estimate + 1e-6);
  o.threads = 1;
  const IntegrationResult c = integrate(f, o, RngStream(11, 3));
  CHECK(a.value == c.value);

  IntegrationOptions ad;
  ad.mode = IntegrationMode::Adaptive;
  ad.budget = 50'000;
  const IntegrationResult d = integrate(f, ad);
  const IntegrationResult e = integrate(f, ad);
  CHECK(d.value == e.value);
  CHECK(d.error_estimate == e.error_estimate);
}

TEST_CASE("integrate: exhausted budget is flagged") {
  Integrand f{[](std::span<const double> t) { return std::sqrt(std::abs(t[0] - 0.3)) * std::cos(40 * t[1]); },
              {Axis::bounded(0, 1), Axis::bounded(0, 1)}};
  IntegrationOptions o;
  o.mode = IntegrationMode::Adaptive;
  o.budget = 500;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-14;
  CHECK_FALSE(integrate(f, o).converged);
}

TEST_CASE("integrate: NaN integrand throws") {
  Integrand f{[](std::span<const double>) { return std::nan(""); }, {Axis::bounded(0, 1)}};
  CHECK_THROWS_AS(integrate(f), EvaluationError);
}

TEST_CASE("rng streams") {
  RngStream a(5, 2), b(5, 2), c(5, 3);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform(), y = b.uniform(), z = c.uniform();
    CHECK(x == y);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differ |= x != z;
  }
  CHECK(differ);
}
