#pragma once

#include <span>

#include "conjdist/heights.hpp"
#include "conjdist/numerics.hpp"
#include "conjdist/poly.hpp"
#include "conjdist/region.hpp"

namespace conjdist {

/// Largest degree the quadrature routines accept.
inline constexpr int kMaxDensityDegree = 15;

/// A point (x, z) of R^k x C_+^l at which a mixed correlation function is
/// evaluated, together with the height that fixes the coefficient laws.
struct DensityQuery {
  WeightedHeight h;
  RootConfiguration config;

  int k() const { return config.k(); }
  int l() const { return config.l(); }
};

/// Laws of the coefficients eta_i / w_i of the random polynomial attached to
/// a height: f_i(t) = w_i / (2 Gamma(1 + 1/p)) exp(-|w_i t|^p), or
/// (w_i / 2) 1{|w_i t| <= 1} for p = inf.
class CoefficientDensity {
 public:
  explicit CoefficientDensity(const WeightedHeight& h);

  double operator()(int i, double t) const;
  /// prod_i f_i(a_i) for a coefficient vector of length n + 1.
  double product(std::span<const double> a) const;

 private:
  Eigen::VectorXd w_;
  double p_;
  bool infinite_;
  double single_norm_;   // 1 / (2 Gamma(1 + 1/p)), or 1/2
  double product_norm_;  // prod_i w_i * single_norm^(n+1)
};

/// Closed form on the top stratum k + 2l = n:
/// 2^l c_{n,p,w} sqrt|D[q]| / l_{p,w}[q]^{n+1}, q the monic polynomial with
/// the query's zeros. Coincident points give 0.
double rho_closed_top(const DensityQuery& q);

/// The symmetric function rho_m of m conjugate-closed points (m <= n): the
/// absolute Vandermonde times an (n - m + 1)-dimensional integral over the
/// cofactor coefficients t_0..t_{n-m}.
IntegrationResult rho_m(const WeightedHeight& h, const PointSet& points,
                        const IntegrationOptions& options = {});

/// Mixed (k, l)-correlation function, 2^l rho_{k+2l}(x, z, conj z), by direct
/// quadrature over the cofactor coefficients.
IntegrationResult rho_general(const DensityQuery& q, const IntegrationOptions& options = {});

/// The same function with the radial direction of the cofactor integral done
/// in closed form: c_{n,p,w} V 2^l times an (n - m)-dimensional integral of
/// prod |T(x_i)| |T(z_i)|^2 / l_{p,w}[T q]^{n+1} over monic cofactors T.
/// On the top stratum this is exactly rho_closed_top.
IntegrationResult rho_projective(const DensityQuery& q, const IntegrationOptions& options = {});

/// Density of real zeros in the reduced form with t_{-1} = t_n = 0.
IntegrationResult rho_real_density(const WeightedHeight& h, double x,
                                   const IntegrationOptions& options = {});

/// Density of complex zeros in the reduced form with the 4 |Im z| prefactor.
/// Needs n >= 2.
IntegrationResult rho_complex_density(const WeightedHeight& h, Complex z,
                                      const IntegrationOptions& options = {});

/// Probability that the random polynomial has exactly n - 2l real zeros, by
/// quasi-random integration over the n + 1 real dimensions of (x, z, t).
IntegrationResult prob_real_count(const WeightedHeight& h, int l,
                                  const IntegrationOptions& options = {},
                                  RngStream rng = RngStream());

/// Integral of rho_{k,l} over a region: the closed form on the top stratum,
/// otherwise the projective integrand, integrated jointly.
IntegrationResult integrate_rho(const WeightedHeight& h, const Region& B,
                                const IntegrationOptions& options = {},
                                RngStream rng = RngStream());

/// Vol(B_{p,w}^{n+1}) / (2 zeta(n+1)) times the integral of rho over B.
IntegrationResult limit_integral_result(const WeightedHeight& h, const Region& B,
                                        const IntegrationOptions& options = {});
double limit_integral(const WeightedHeight& h, const Region& B);

}  // namespace conjdist
