#include "conjdist/poly.hpp"

#include <cmath>
#include <limits>

namespace conjdist {

PointSet RootConfiguration::conjugate_closed() const {
  PointSet pts(reals.size() + 2 * uppers.size());
  Eigen::Index i = 0;
  for (double x : reals) pts(i++) = Complex(x, 0.0);
  for (const Complex& z : uppers) {
    pts(i++) = z;
    pts(i++) = std::conj(z);
  }
  return pts;
}

namespace {

bool is_real_point(const Complex& z) {
  return std::abs(z.imag()) <= kConjugateTolerance * (1.0 + std::abs(z));
}

// Expands prod (z - r) over the multiset into monic real coefficients,
// pairing each non-real point with its conjugate partner.
Eigen::VectorXd monic_coefficients(const PointSet& points) {
  std::vector<Complex> upper, lower;
  Eigen::VectorXd c = Eigen::VectorXd::Ones(1);
  auto times_linear = [&c](double r) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(c.size() + 1);
    next.tail(c.size()) += c;
    next.head(c.size()) -= r * c;
    c = std::move(next);
  };
  auto times_quadratic = [&c](double b, double s) {  // z^2 + b z + s
    Eigen::VectorXd next = Eigen::VectorXd::Zero(c.size() + 2);
    next.tail(c.size()) += c;
    next.segment(1, c.size()) += b * c;
    next.head(c.size()) += s * c;
    c = std::move(next);
  };

  for (const Complex& z : points) {
    if (is_real_point(z))
      times_linear(z.real());
    else if (z.imag() > 0)
      upper.push_back(z);
    else
      lower.push_back(z);
  }
  if (upper.size() != lower.size())
    throw DomainError("point set is not closed under complex conjugation");

  std::vector<bool> used(lower.size(), false);
  for (const Complex& z : upper) {
    std::size_t best = lower.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - std::conj(lower[j]));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best_dist > kConjugateTolerance * (1.0 + std::abs(z)))
      throw DomainError("point set is not closed under complex conjugation");
    used[best] = true;
    const Complex mid = 0.5 * (z + std::conj(lower[best]));
    times_quadratic(-2.0 * mid.real(), std::norm(mid));
  }
  return c;
}

}  // namespace

Eigen::VectorXd elem_sym(const PointSet& points) {
  if (points.size() < 1) throw DomainError("elem_sym: need at least one point");
  const Eigen::VectorXd c = monic_coefficients(points);
  const Eigen::Index m = points.size();
  Eigen::VectorXd sigma(m + 1);
  for (Eigen::Index i = 0; i <= m; ++i) sigma(i) = (i % 2 ? -1.0 : 1.0) * c(m - i);
  return sigma;
}

double vandermonde_abs(const PointSet& points) {
  double v = 1.0;
  for (Eigen::Index i = 0; i < points.size(); ++i)
    for (Eigen::Index j = i + 1; j < points.size(); ++j) v *= std::abs(points(i) - points(j));
  return v;
}

double discriminant_from_roots(const PointSet& points) {
  // Validates conjugate closure, matching elem_sym's contract.
  monic_coefficients(points);
  Complex d(1.0, 0.0);
  for (Eigen::Index i = 0; i < points.size(); ++i)
    for (Eigen::Index j = i + 1; j < points.size(); ++j) {
      const Complex diff = points(i) - points(j);
      d *= diff * diff;
    }
  return d.real();
}

RealPoly expand_monic(const RootConfiguration& config) {
  return RealPoly(monic_coefficients(config.conjugate_closed()));
}

RealPoly derivative(const RealPoly& q) {
  if (q.degree() == 0) throw DomainError("derivative: constant polynomial has no derivative");
  Eigen::VectorXd c(q.degree());
  for (int i = 1; i <= q.degree(); ++i) c(i - 1) = i * q[i];
  return RealPoly(std::move(c));
}

}  // namespace conjdist
