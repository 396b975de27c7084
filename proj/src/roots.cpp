#include "conjdist/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace conjdist {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct HornerResult {
  Complex value;
  Complex slope;
  double bound;  // sum |a_i| |z|^i, the rounding scale of value
};

HornerResult horner(const Eigen::VectorXd& a, Complex z) {
  const int n = static_cast<int>(a.size()) - 1;
  Complex p = a(n);
  Complex dp = 0.0;
  double bound = std::abs(a(n));
  const double r = std::abs(z);
  for (int i = n - 1; i >= 0; --i) {
    dp = dp * z + p;
    p = p * z + a(i);
    bound = bound * r + std::abs(a(i));
  }
  return {p, dp, bound};
}

// Aberth-Ehrlich on a polynomial with non-zero constant term.
std::vector<Complex> aberth(const Eigen::VectorXd& a) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n == 1) return {Complex(-a(0) / a(1), 0.0)};

  // Start on a circle whose radius is the geometric mean of the root moduli,
  // clamped by the Fujiwara bound.
  double fujiwara = 0.0;
  for (int i = 0; i < n; ++i)
    fujiwara = std::max(fujiwara, std::pow(std::abs(a(i) / a(n)), 1.0 / (n - i)));
  fujiwara *= 2.0;
  const double radius =
      std::clamp(std::pow(std::abs(a(0) / a(n)), 1.0 / n), 1e-3 * fujiwara, fujiwara);
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

  std::vector<bool> done(n, false);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const HornerResult h = horner(a, z[i]);
      if (std::abs(h.value) <= 4.0 * kEps * h.bound) {
        done[i] = true;
        continue;
      }
      all_done = false;
      const Complex ratio = h.value / h.slope;
      Complex repulsion = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[i] -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }
  return z;
}

Complex newton_polish(const Eigen::VectorXd& a, Complex z) {
  for (int s = 0; s < 3; ++s) {
    const HornerResult h = horner(a, z);
    if (h.slope == 0.0) break;
    const Complex next = z - h.value / h.slope;
    if (std::abs(horner(a, next).value) >= std::abs(h.value)) break;
    z = next;
  }
  return z;
}

void check_leading(const RealPoly& q) {
  if (q.degree() < 1) throw DomainError("find_roots: degree must be >= 1");
  const double scale = q.coeffs().cwiseAbs().maxCoeff();
  if (std::abs(q.leading()) <= 1e-14 * scale)
    throw DomainError("find_roots: leading coefficient is numerically zero");
}

}  // namespace

std::vector<Complex> all_roots(const RealPoly& q) {
  check_leading(q);
  const Eigen::VectorXd& a = q.coeffs();
  int zeros = 0;
  while (zeros < q.degree() && a(zeros) == 0.0) ++zeros;
  std::vector<Complex> roots(zeros, Complex(0.0, 0.0));
  if (zeros == q.degree()) return roots;
  const Eigen::VectorXd reduced = a.tail(a.size() - zeros);
  for (const Complex& z : aberth(reduced)) roots.push_back(newton_polish(reduced, z));
  return roots;
}

ClassifiedRoots find_roots(const RealPoly& q, double real_tol) {
  const std::vector<Complex> roots = all_roots(q);
  const Eigen::VectorXd& a = q.coeffs();
  const int n = q.degree();

  ClassifiedRoots out;
  std::vector<Complex> upper, lower;
  for (const Complex& z : roots) {
    if (std::abs(z.imag()) <= real_tol * (1.0 + std::abs(z.real())))
      out.reals.push_back(z.real());
    else
      (z.imag() > 0 ? upper : lower).push_back(z);
  }
  // Near-real ambiguity resolves toward the real axis.
  auto by_abs_imag = [](const Complex& x, const Complex& y) {
    return std::abs(x.imag()) < std::abs(y.imag());
  };
  while (upper.size() != lower.size()) {
    auto& bigger = upper.size() > lower.size() ? upper : lower;
    auto it = std::min_element(bigger.begin(), bigger.end(), by_abs_imag);
    out.reals.push_back(it->real());
    bigger.erase(it);
  }
  for (double& x : out.reals) x = newton_polish(a, Complex(x, 0.0)).real();
  std::sort(out.reals.begin(), out.reals.end());

  out.uppers = std::move(upper);
  std::sort(out.uppers.begin(), out.uppers.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  bool accepted = true;
  auto account = [&](Complex z) {
    const HornerResult h = horner(a, z);
    const double r = std::abs(h.value);
    out.residual = std::max(out.residual, r);
    const double scale = a.cwiseAbs().sum() * std::pow(std::max(1.0, std::abs(z)), n);
    if (!(r <= kRootAcceptTolerance * scale)) accepted = false;
  };
  for (double x : out.reals) account(Complex(x, 0.0));
  for (const Complex& z : out.uppers) account(z);
  for (const Complex& z : lower) account(z);

  if (!accepted) throw RootFindingError("find_roots: residual above tolerance", out);
  return out;
}

}  // namespace conjdist
