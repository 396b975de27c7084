#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "conjdist/errors.hpp"

namespace conjdist {

using Complex = std::complex<double>;
using PointSet = Eigen::VectorXcd;

/// Dense univariate polynomial, coefficient i multiplies z^i.
/// The degree is the index of the last coefficient, which must be non-zero.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() = default;

  explicit Polynomial(Coefficients coeffs) : coeffs_(std::move(coeffs)) { validate(); }

  Polynomial(std::initializer_list<Scalar> coeffs) : coeffs_(coeffs.size()) {
    Eigen::Index i = 0;
    for (Scalar c : coeffs) coeffs_(i++) = c;
    validate();
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Coefficients& coeffs() const { return coeffs_; }
  Scalar operator[](int i) const { return coeffs_(i); }
  Scalar leading() const { return coeffs_(coeffs_.size() - 1); }

  template <typename Other>
  Polynomial<Other> cast() const {
    return Polynomial<Other>(coeffs_.template cast<Other>().eval());
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_.size() == b.coeffs_.size() && a.coeffs_ == b.coeffs_;
  }

 private:
  void validate() const {
    if (coeffs_.size() == 0) throw DomainError("polynomial needs at least one coefficient");
    if (coeffs_(coeffs_.size() - 1) == Scalar(0))
      throw DomainError("polynomial leading coefficient must be non-zero");
  }

  Coefficients coeffs_;
};

using IntPoly = Polynomial<std::int64_t>;
using RealPoly = Polynomial<double>;

/// k real points and l points of the open upper half-plane.
struct RootConfiguration {
  std::vector<double> reals;
  std::vector<Complex> uppers;

  int k() const { return static_cast<int>(reals.size()); }
  int l() const { return static_cast<int>(uppers.size()); }

  /// x_1..x_k, z_1, conj(z_1), ..., z_l, conj(z_l).
  PointSet conjugate_closed() const;
};

/// Tolerance for conjugate-closure and imaginary-residue checks.
inline constexpr double kConjugateTolerance = 1e-9;

/// sigma_0..sigma_m of a conjugate-closed multiset. Throws DomainError when
/// the multiset is not closed under conjugation.
Eigen::VectorXd elem_sym(const PointSet& points);

/// prod_{i<j} |z_i - z_j|; 1 for a single point.
double vandermonde_abs(const PointSet& points);

/// prod_{i<j} (z_i - z_j)^2, real for conjugate-closed input.
double discriminant_from_roots(const PointSet& points);

/// The monic real polynomial vanishing at x, z and conj(z).
RealPoly expand_monic(const RootConfiguration& config);

/// Horner evaluation at a real or complex argument.
template <typename Scalar, typename Arg>
auto evaluate(const Polynomial<Scalar>& q, const Arg& z) {
  using Result = decltype(Arg() * double());
  Result acc(0);
  for (int i = q.degree(); i >= 0; --i) acc = acc * z + static_cast<double>(q[i]);
  return acc;
}

RealPoly derivative(const RealPoly& q);

/// Product of two polynomials.
template <typename Scalar>
Polynomial<Scalar> multiply(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  typename Polynomial<Scalar>::Coefficients c =
      Polynomial<Scalar>::Coefficients::Zero(a.degree() + b.degree() + 1);
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) c(i + j) += a[i] * b[j];
  return Polynomial<Scalar>(std::move(c));
}

}  // namespace conjdist
