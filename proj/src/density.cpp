#include "conjdist/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>
#include <numbers>
#include <string>

namespace conjdist {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Monic coefficients of prod (z - p) for a conjugate-closed point set;
// entry s is (-1)^(m-s) sigma_{m-s}.
Eigen::VectorXd monic_from_sigma(const Eigen::VectorXd& sigma) {
  const Eigen::Index m = sigma.size() - 1;
  Eigen::VectorXd c(m + 1);
  for (Eigen::Index s = 0; s <= m; ++s) c(s) = ((m - s) % 2 ? -1.0 : 1.0) * sigma(m - s);
  return c;
}

// Typical magnitude of each cofactor coefficient t_j when the coefficients of
// T q are of size 1 / w_i. Back-substitution from the top recovers t from
// a_{m..n}; the bound sums the absolute row entries.
Eigen::VectorXd cofactor_scales(const Eigen::VectorXd& monic, const Eigen::VectorXd& w) {
  const int m = static_cast<int>(monic.size()) - 1;
  const int n = static_cast<int>(w.size()) - 1;
  const int d = n - m + 1;
  // rows(j, i): coefficient of a_i in t_j.
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(d, n + 1);
  for (int j = d - 1; j >= 0; --j) {
    rows(j, m + j) = 1.0;
    for (int s = 1; s <= m && j + s <= d - 1; ++s) rows.row(j) -= monic(m - s) * rows.row(j + s);
  }
  Eigen::VectorXd scale(d);
  for (int j = 0; j < d; ++j) scale(j) = (rows.row(j).cwiseAbs().array() / w.transpose().array()).sum();
  return scale;
}

void check_degree(int n) {
  if (n > kMaxDensityDegree)
    throw UnsupportedError("degree " + std::to_string(n) + " exceeds the quadrature limit " +
                           std::to_string(kMaxDensityDegree));
}

void check_query(const DensityQuery& q) {
  const int n = q.h.degree();
  check_degree(n);
  const int m = q.k() + 2 * q.l();
  if (m <= 0 || m > n)
    throw DomainError("density query needs 0 < k + 2l <= n (k=" + std::to_string(q.k()) +
                      ", l=" + std::to_string(q.l()) + ", n=" + std::to_string(n) + ")");
  for (const Complex& z : q.config.uppers)
    if (z.imag() < 0.0) throw DomainError("complex slots must lie in the upper half-plane");
}

bool degenerate(const DensityQuery& q) {
  for (const Complex& z : q.config.uppers)
    if (z.imag() == 0.0) return true;
  return vandermonde_abs(q.config.conjugate_closed()) == 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------

CoefficientDensity::CoefficientDensity(const WeightedHeight& h)
    : w_(h.weights()), p_(h.p().value()), infinite_(h.p().is_infinite()) {
  single_norm_ = infinite_ ? 0.5 : 0.5 / gamma(1.0 + 1.0 / p_);
  product_norm_ = w_.prod() * std::pow(single_norm_, static_cast<double>(w_.size()));
}

double CoefficientDensity::operator()(int i, double t) const {
  const double s = std::abs(w_(i) * t);
  if (infinite_) return s <= 1.0 ? w_(i) * single_norm_ : 0.0;
  return w_(i) * single_norm_ * std::exp(-std::pow(s, p_));
}

double CoefficientDensity::product(std::span<const double> a) const {
  if (infinite_) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(w_(i) * a[i]) > 1.0) return 0.0;
    return product_norm_;
  }
  double e = 0.0;
  if (p_ == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) e += (w_(i) * a[i]) * (w_(i) * a[i]);
  } else if (p_ == 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) e += std::abs(w_(i) * a[i]);
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) e += std::pow(std::abs(w_(i) * a[i]), p_);
  }
  return product_norm_ * std::exp(-e);
}

namespace {

// Each outer point of a nested integral costs a few hundred inner
// evaluations, so the default outer budget is smaller.
constexpr std::size_t kNestedOuterBudget = 50'000;

// Gauss-Legendre 8-point rule on [-1, 1]; exact for degree <= 15.
constexpr std::array<double, 4> kGlNode = {0.183434642495649804939476142360184,
                                           0.525532409916328985817739049189246,
                                           0.796666477413626739591553936475831,
                                           0.960289856497536231683560868569473};
constexpr std::array<double, 4> kGlWeight = {0.362683783378361982965150449277196,
                                             0.313706645877887287337962201986601,
                                             0.222381034453374470544355994426241,
                                             0.101228536290376259152616607684230};

// prod |sum_j t_j p^j| over the kernel points.
double kernel_product(std::span<const double> t, const PointSet& points) {
  double kernel = 1.0;
  for (const Complex& p : points) {
    Complex acc = 0.0;
    for (int j = static_cast<int>(t.size()) - 1; j >= 0; --j) acc = acc * p + t[j];
    kernel *= std::abs(acc);
  }
  return kernel;
}

// Integral over t in R^d of prod_i f_i((C t)_i) prod_p |T(p)|, T = sum t_j z^j.
// `points` must be closed under conjugation.
//
// For p < inf the whole t-space is integrated adaptively. For p = inf the
// density is constant on the polytope |w_i (C t)_i| <= 1, so the t_0 axis is
// done exactly: for fixed t_1.. it is an interval on which the kernel is a
// polynomial of degree m between the zeros of the real factors, and an
// 8-point Gauss-Legendre rule per piece is exact. What is left is a
// continuous integrand in the remaining d - 1 variables.
IntegrationResult cofactor_integral(const WeightedHeight& h, const Eigen::MatrixXd& C,
                                    const PointSet& points, const Eigen::VectorXd& scale,
                                    const IntegrationOptions& options) {
  const int n = h.degree();
  const int d = static_cast<int>(C.cols());
  const CoefficientDensity f(h);

  if (!h.p().is_infinite()) {
    // t_0 is integrated piecewise between the points where a real kernel
    // factor or a coefficient a_i changes sign, so the remaining integrand
    // in t_1.. has no kinks along oblique hyperplanes.
    // |a|^p is only smooth at a = 0 for even integer p.
    const double p = h.p().value();
    const bool rough = !(p == std::floor(p) && static_cast<long>(p) % 2 == 0);
    auto inner = [&, n, d, rough](std::span<const double> outer, double* inner_err) {
      double t[kMaxDensityDegree + 1];
      t[0] = 0.0;
      for (int j = 1; j < d; ++j) t[j] = outer[j - 1];
      double slope[kMaxDensityDegree + 1], offset[kMaxDensityDegree + 1];
      std::vector<double> cuts;
      for (int i = 0; i <= n; ++i) {
        double b = 0.0;
        for (int j = 1; j < d; ++j) b += C(i, j) * t[j];
        slope[i] = C(i, 0);
        offset[i] = b;
        if (rough && slope[i] != 0.0) cuts.push_back(-b / slope[i]);
      }
      for (const Complex& p : points) {
        if (p.imag() != 0.0) continue;
        double rest = 0.0;
        for (int j = d - 1; j >= 1; --j) rest = (rest + t[j]) * p.real();
        cuts.push_back(-rest);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      Integrand piece;
      piece.f = [&](std::span<const double> u) {
        double tt[kMaxDensityDegree + 1], a[kMaxDensityDegree + 1];
        std::copy(t, t + d, tt);
        tt[0] = u[0];
        for (int i = 0; i <= n; ++i) a[i] = slope[i] * u[0] + offset[i];
        const double dens = f.product(std::span<const double>(a, n + 1));
        return dens == 0.0 ? 0.0 : dens * kernel_product(std::span<const double>(tt, d), points);
      };
      IntegrationOptions io;
      io.mode = IntegrationMode::Adaptive;
      io.abs_tol = 1e-15;
      io.rel_tol = 1e-11;
      io.budget = 6000;
      io.initial_cells = 8;
      double sum = 0.0, err = 0.0;
      for (std::size_t c = 0; c <= cuts.size(); ++c) {
        const double lo = c == 0 ? -INFINITY : cuts[c - 1];
        const double hi = c == cuts.size() ? INFINITY : cuts[c];
        if (!(hi > lo)) continue;
        piece.axes = {Axis::interval(lo, hi, scale(0))};
        const IntegrationResult r = integrate(piece, io);
        sum += r.value;
        err += r.error_estimate;
      }
      if (inner_err) *inner_err = err;
      return sum;
    };
    if (d == 1) {
      double err = 0.0;
      const double v = inner({}, &err);
      return {v, err, 1, true};
    }
    Integrand integrand;
    for (int j = 1; j < d; ++j) integrand.axes.push_back(Axis::real(0.0, scale(j)));
    integrand.f = [&](std::span<const double> outer) { return inner(outer, nullptr); };
    IntegrationOptions outer = options;
    if (outer.budget == 0) outer.budget = kNestedOuterBudget;
    return integrate(integrand, outer);
  }

  const Eigen::VectorXd& w = h.weights();
  const double dens = f.product(std::vector<double>(n + 1, 0.0));
  auto inner = [&, n, d](std::span<const double> outer) {
    double t[kMaxDensityDegree + 1];
    t[0] = 0.0;
    for (int j = 1; j < d; ++j) t[j] = outer[j - 1];
    double lo = -INFINITY, hi = INFINITY;
    for (int i = 0; i <= n; ++i) {
      double b = 0.0;
      for (int j = 1; j < d; ++j) b += C(i, j) * t[j];
      const double s = C(i, 0);
      const double r = 1.0 / w(i);
      if (s == 0.0) {
        if (std::abs(b) > r) return 0.0;
        continue;
      }
      double a1 = (-r - b) / s, a2 = (r - b) / s;
      if (a1 > a2) std::swap(a1, a2);
      lo = std::max(lo, a1);
      hi = std::min(hi, a2);
    }
    if (!(hi > lo)) return 0.0;
    // Zeros of T(x) in t_0 for the real kernel points.
    std::vector<double> cuts{lo, hi};
    for (const Complex& p : points) {
      if (p.imag() != 0.0) continue;
      double rest = 0.0;
      for (int j = d - 1; j >= 1; --j) rest = (rest + t[j]) * p.real();
      if (-rest > lo && -rest < hi) cuts.push_back(-rest);
    }
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
      const double half = 0.5 * (cuts[c + 1] - cuts[c]);
      for (std::size_t g = 0; g < kGlNode.size(); ++g)
        for (double sign : {-1.0, 1.0}) {
          t[0] = mid + sign * half * kGlNode[g];
          sum += kGlWeight[g] * half * kernel_product(std::span<const double>(t, d), points);
        }
    }
    return dens * sum;
  };

  if (d == 1) return {inner({}), 0.0, 1, true};
  Integrand integrand;
  for (int j = 1; j < d; ++j) integrand.axes.push_back(Axis::bounded(-scale(j), scale(j)));
  integrand.f = inner;
  return integrate(integrand, options);
}

}  // namespace

// ---------------------------------------------------------------------------

double rho_closed_top(const DensityQuery& q) {
  check_query(q);
  const int n = q.h.degree();
  if (q.k() + 2 * q.l() != n)
    throw DomainError("rho_closed_top needs k + 2l = n");
  if (degenerate(q)) return 0.0;
  const PointSet pts = q.config.conjugate_closed();
  const RealPoly monic = expand_monic(q.config);
  const double root_disc = std::sqrt(std::abs(discriminant_from_roots(pts)));
  return std::ldexp(limit_constant_c(q.h), q.l()) * root_disc /
         std::pow(lp_norm(q.h, monic), n + 1);
}

IntegrationResult rho_m(const WeightedHeight& h, const PointSet& points,
                        const IntegrationOptions& options) {
  const int n = h.degree();
  const int m = static_cast<int>(points.size());
  check_degree(n);
  if (m < 1 || m > n) throw DomainError("rho_m needs 1 <= m <= n");
  const double V = vandermonde_abs(points);
  if (V == 0.0) return {0.0, 0.0, 1, true};

  const Eigen::VectorXd sigma = elem_sym(points);
  const int d = n - m + 1;
  auto sig = [&](int i) { return (i < 0 || i > m) ? 0.0 : sigma(i); };
  // coeff(i, j) = (-1)^(m-i+j) sigma_{m-i+j}: the argument of f_i is
  // sum_j coeff(i, j) t_j.
  Eigen::MatrixXd coeff(n + 1, d);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < d; ++j) {
      const int idx = m - i + j;
      coeff(i, j) = ((idx % 2 + 2) % 2 ? -1.0 : 1.0) * sig(idx);
    }

  const Eigen::VectorXd scale = cofactor_scales(monic_from_sigma(sigma), h.weights());
  IntegrationResult r = cofactor_integral(h, coeff, points, scale, options);
  r.value *= V;
  r.error_estimate *= V;
  return r;
}

IntegrationResult rho_general(const DensityQuery& q, const IntegrationOptions& options) {
  check_query(q);
  if (degenerate(q)) return {0.0, 0.0, 1, true};
  IntegrationResult r = rho_m(q.h, q.config.conjugate_closed(), options);
  r.value = std::ldexp(r.value, q.l());
  r.error_estimate = std::ldexp(r.error_estimate, q.l());
  return r;
}

namespace {

// Integrand of the projective form at a fixed configuration: y are the
// non-leading coefficients of the monic cofactor T, already rescaled.
struct ProjectiveKernel {
  const WeightedHeight& h;
  Eigen::VectorXd monic;  // of the configuration polynomial, length m + 1
  int n;
  int d;  // number of cofactor coefficients, leading one fixed to 1

  // prod |T(p)| / l_{p,w}[T q]^{n+1} for cofactor coefficients t (length d).
  double operator()(std::span<const double> t, const PointSet& points) const {
    const int m = static_cast<int>(monic.size()) - 1;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
    for (int j = 0; j < d; ++j)
      for (int s = 0; s <= m; ++s) a(j + s) += t[j] * monic(s);
    double kernel = 1.0;
    for (const Complex& p : points) {
      Complex acc = 0.0;
      for (int j = d - 1; j >= 0; --j) acc = acc * p + t[j];
      kernel *= std::abs(acc);
    }
    return kernel / std::pow(lp_norm(h, a), n + 1);
  }
};

}  // namespace

IntegrationResult rho_projective(const DensityQuery& q, const IntegrationOptions& options) {
  check_query(q);
  if (degenerate(q)) return {0.0, 0.0, 1, true};
  const int n = q.h.degree();
  const int m = q.k() + 2 * q.l();
  const PointSet points = q.config.conjugate_closed();
  const double V = vandermonde_abs(points);
  const double prefactor = std::ldexp(limit_constant_c(q.h), q.l()) * V;
  const int d = n - m + 1;
  const ProjectiveKernel kernel{q.h, monic_from_sigma(elem_sym(points)), n, d};

  if (d == 1) {
    const double t[1] = {1.0};
    return {prefactor * kernel(t, points), 0.0, 1, true};
  }
  const Eigen::VectorXd scale = cofactor_scales(kernel.monic, q.h.weights());
  Integrand integrand;
  for (int j = 0; j < d - 1; ++j) integrand.axes.push_back(Axis::real(0.0, scale(j) / scale(d - 1)));
  integrand.f = [&, d](std::span<const double> y) {
    double t[16];
    for (int j = 0; j < d - 1; ++j) t[j] = y[j];
    t[d - 1] = 1.0;
    return kernel(std::span<const double>(t, d), points);
  };
  IntegrationResult r = integrate(integrand, options);
  r.value *= prefactor;
  r.error_estimate *= prefactor;
  return r;
}

// ---------------------------------------------------------------------------

IntegrationResult rho_real_density(const WeightedHeight& h, double x,
                                   const IntegrationOptions& options) {
  const int n = h.degree();
  check_degree(n);
  // Argument of f_i is t_{i-1} - x t_i, with t_{-1} = t_n = 0.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n + 1, n);
  for (int i = 0; i <= n; ++i) {
    if (i >= 1) C(i, i - 1) = 1.0;
    if (i < n) C(i, i) = -x;
  }
  Eigen::VectorXd monic(2);
  monic << -x, 1.0;
  PointSet points(1);
  points << Complex(x, 0.0);
  return cofactor_integral(h, C, points, cofactor_scales(monic, h.weights()), options);
}

IntegrationResult rho_complex_density(const WeightedHeight& h, Complex z,
                                      const IntegrationOptions& options) {
  const int n = h.degree();
  check_degree(n);
  if (n < 2) throw DomainError("density of complex zeros needs n >= 2");
  if (z.imag() < 0.0) throw DomainError("z must lie in the upper half-plane");
  if (z.imag() == 0.0) return {0.0, 0.0, 1, true};
  const double two_re = 2.0 * z.real();
  const double abs2 = std::norm(z);
  // Argument of f_i is t_{i-2} - 2 Re z t_{i-1} + |z|^2 t_i, t_j = 0 outside 0..n-2.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n + 1, n - 1);
  for (int i = 0; i <= n; ++i) {
    if (i >= 2) C(i, i - 2) = 1.0;
    if (i >= 1 && i - 1 < n - 1) C(i, i - 1) = -two_re;
    if (i < n - 1) C(i, i) = abs2;
  }
  Eigen::VectorXd monic(3);
  monic << abs2, -two_re, 1.0;
  // |T(z)|^2 = |T(z)| |T(conj z)|
  PointSet points(2);
  points << z, std::conj(z);
  IntegrationResult r =
      cofactor_integral(h, C, points, cofactor_scales(monic, h.weights()), options);
  const double pre = 4.0 * z.imag();
  r.value *= pre;
  r.error_estimate *= pre;
  return r;
}

// ---------------------------------------------------------------------------

IntegrationResult prob_real_count(const WeightedHeight& h, int l, const IntegrationOptions& options,
                                  RngStream rng) {
  const int n = h.degree();
  check_degree(n);
  if (l < 0 || 2 * l > n) throw DomainError("prob_real_count needs 0 <= 2l <= n");
  const int k = n - 2 * l;
  const CoefficientDensity f(h);
  const bool infinite = h.p().is_infinite();
  const double prefactor = std::ldexp(1.0, l) / (factorial(l) * factorial(k));
  constexpr double pi = std::numbers::pi;

  Integrand integrand;
  integrand.axes.assign(n + 1, Axis::bounded(0.0, 1.0));
  integrand.f = [&, n, k, l](std::span<const double> u) {
    for (double ui : u)
      if (ui <= 0.0 || ui >= 1.0) return 0.0;
    // Cauchy-type maps of the unit cube onto R^k x C_+^l, then a t-map
    // scaled by the configuration's norm.
    double jac = 1.0;
    RootConfiguration cfg;
    cfg.reals.resize(k);
    cfg.uppers.resize(l);
    for (int i = 0; i < k; ++i) {
      const double x = std::tan(pi * (u[i] - 0.5));
      cfg.reals[i] = x;
      jac *= pi * (1.0 + x * x);
    }
    for (int i = 0; i < l; ++i) {
      const double re = std::tan(pi * (u[k + 2 * i] - 0.5));
      const double im = std::tan(0.5 * pi * u[k + 2 * i + 1]);
      cfg.uppers[i] = Complex(re, im);
      jac *= pi * (1.0 + re * re) * 0.5 * pi * (1.0 + im * im);
    }
    const PointSet pts = cfg.conjugate_closed();
    const double V = vandermonde_abs(pts);
    if (V == 0.0 || !std::isfinite(jac)) return 0.0;
    const Eigen::VectorXd sigma = elem_sym(pts);
    Eigen::VectorXd monic = monic_from_sigma(sigma);
    const double S = lp_norm(h, monic);

    const double v = u[n];
    double t, tjac;
    if (infinite) {
      t = (2.0 * v - 1.0) / S;
      tjac = 2.0 / S;
    } else {
      const double c = std::cos(pi * (v - 0.5));
      t = std::tan(pi * (v - 0.5)) / S;
      tjac = pi / (c * c * S);
    }
    // prod_i f_i((-1)^{n-i} t sigma_{n-i})
    double a[16];
    for (int i = 0; i <= n; ++i) a[i] = ((n - i) % 2 ? -1.0 : 1.0) * t * sigma(n - i);
    const double dens = f.product(std::span<const double>(a, n + 1));
    if (dens == 0.0) return 0.0;
    return V * std::pow(std::abs(t), n) * dens * tjac * jac;
  };
  IntegrationOptions opt = options;
  opt.mode = IntegrationMode::QuasiRandom;
  IntegrationResult r = integrate(integrand, opt, rng);
  r.value *= prefactor;
  r.error_estimate *= prefactor;
  return r;
}

// ---------------------------------------------------------------------------

IntegrationResult integrate_rho(const WeightedHeight& h, const Region& B,
                                const IntegrationOptions& options, RngStream rng) {
  const int n = h.degree();
  check_degree(n);
  B.validate(n);
  const int k = B.k, l = B.l;
  const int m = k + 2 * l;
  const int d = n - m + 1;
  const bool top = d == 1;
  const double c = limit_constant_c(h);

  IntegrationResult total{0.0, 0.0, 0, true};
  for (const RegionBox& box : B.boxes) {
    if (box.measure() == 0.0) continue;
    Integrand integrand;
    for (const Interval& I : box.reals) integrand.axes.push_back(Axis::interval(I.lo, I.hi));
    for (const UpperRect& R : box.uppers) {
      integrand.axes.push_back(Axis::interval(R.re.lo, R.re.hi));
      integrand.axes.push_back(Axis::interval(R.im.lo, R.im.hi));
    }
    for (int j = 0; j < d - 1; ++j) integrand.axes.push_back(Axis::real(0.0, 1.0));

    integrand.f = [&, k, l, m, d, top](std::span<const double> v) {
      DensityQuery q{h, {}};
      q.config.reals.assign(v.begin(), v.begin() + k);
      for (int i = 0; i < l; ++i) q.config.uppers.emplace_back(v[k + 2 * i], v[k + 2 * i + 1]);
      if (degenerate(q)) return 0.0;
      if (top) return rho_closed_top(q);
      const PointSet points = q.config.conjugate_closed();
      const double V = vandermonde_abs(points);
      const ProjectiveKernel kernel{h, monic_from_sigma(elem_sym(points)), n, d};
      const Eigen::VectorXd scale = cofactor_scales(kernel.monic, h.weights());
      double t[16];
      double jac = 1.0;
      for (int j = 0; j < d - 1; ++j) {
        const double s = scale(j) / scale(d - 1);
        t[j] = s * v[m + j];
        jac *= s;
      }
      t[d - 1] = 1.0;
      return std::ldexp(c, l) * V * jac * kernel(std::span<const double>(t, d), points);
    };
    const IntegrationResult r = integrate(integrand, options, rng);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  return total;
}

IntegrationResult limit_integral_result(const WeightedHeight& h, const Region& B,
                                        const IntegrationOptions& options) {
  IntegrationResult r = integrate_rho(h, B, options);
  const double factor = ball_volume(h) / (2.0 * zeta(h.degree() + 1));
  r.value *= factor;
  r.error_estimate *= factor;
  return r;
}

double limit_integral(const WeightedHeight& h, const Region& B) {
  IntegrationOptions opt;
  opt.abs_tol = 1e-10;
  opt.rel_tol = 1e-8;
  return limit_integral_result(h, B, opt).value;
}

}  // namespace conjdist
