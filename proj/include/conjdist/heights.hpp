#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "conjdist/errors.hpp"
#include "conjdist/poly.hpp"

namespace conjdist {

/// Exponent p in [1, inf].
class PNorm {
 public:
  static PNorm finite(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
      throw DomainError("p must be >= 1 (or inf)");
    return PNorm(p);
  }
  static PNorm infinity() { return PNorm(std::numeric_limits<double>::infinity()); }
  /// Accepts a decimal number or the literal "inf".
  static PNorm parse(const std::string& text);

  bool is_infinite() const { return std::isinf(p_); }
  /// The exponent; +infinity for the max-norm.
  double value() const { return p_; }
  std::string to_string() const;

  friend bool operator==(PNorm a, PNorm b) { return a.p_ == b.p_; }

 private:
  explicit PNorm(double p) : p_(p) {}
  double p_;
};

/// Degree n, positive weights w_0..w_n and exponent p.
class WeightedHeight {
 public:
  WeightedHeight(int n, Eigen::VectorXd weights, PNorm p);

  /// All weights equal to one.
  static WeightedHeight unweighted(int n, PNorm p);
  /// Weights binom(n, i)^(-1/2).
  static WeightedHeight bombieri(int n, PNorm p);

  int degree() const { return n_; }
  const Eigen::VectorXd& weights() const { return w_; }
  PNorm p() const { return p_; }

  /// Same degree and exponent, weights multiplied by c > 0.
  WeightedHeight scaled(double c) const { return WeightedHeight(n_, c * w_, p_); }

 private:
  int n_;
  Eigen::VectorXd w_;
  PNorm p_;
};

/// Weighted l_p norm of an arbitrary coefficient vector (length n + 1).
double lp_norm(const WeightedHeight& h, const Eigen::Ref<const Eigen::VectorXd>& coeffs);

template <typename Scalar>
double lp_norm(const WeightedHeight& h, const Polynomial<Scalar>& q) {
  if (q.degree() != h.degree())
    throw DomainError("lp_norm: polynomial degree " + std::to_string(q.degree()) +
                      " does not match height degree " + std::to_string(h.degree()));
  return lp_norm(h, q.coeffs().template cast<double>().eval());
}

/// Volume of the unit weighted l_p ball in R^{n+1}.
double ball_volume(const WeightedHeight& h);

/// binom(n, i)^(-1/2), i = 0..n.
Eigen::VectorXd bombieri_weights(int n);

/// 2 / ((n + 1) Vol(B_{p,w}^{n+1})).
double limit_constant_c(const WeightedHeight& h);

/// The same constant through its Gamma-function form, p < inf only:
/// w_0...w_n Gamma((n+1)/p) / (2^n p Gamma(1+1/p)^{n+1}).
double limit_constant_c_gamma_form(const WeightedHeight& h);

}  // namespace conjdist
