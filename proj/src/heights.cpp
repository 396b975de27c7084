#include "conjdist/heights.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "conjdist/numerics.hpp"

namespace conjdist {

PNorm PNorm::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  double p = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, p);
  if (ec != std::errc() || ptr != end) throw DomainError("cannot parse p from '" + text + "'");
  return finite(p);
}

std::string PNorm::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

WeightedHeight::WeightedHeight(int n, Eigen::VectorXd weights, PNorm p)
    : n_(n), w_(std::move(weights)), p_(p) {
  if (n < 1) throw DomainError("degree must be >= 1");
  if (w_.size() != n + 1)
    throw DomainError("expected " + std::to_string(n + 1) + " weights, got " +
                      std::to_string(w_.size()));
  if (!(w_.array() > 0.0).all() || !w_.allFinite())
    throw DomainError("weights must be positive and finite");
}

WeightedHeight WeightedHeight::unweighted(int n, PNorm p) {
  if (n < 1) throw DomainError("degree must be >= 1");
  return WeightedHeight(n, Eigen::VectorXd::Ones(n + 1), p);
}

WeightedHeight WeightedHeight::bombieri(int n, PNorm p) {
  return WeightedHeight(n, bombieri_weights(n), p);
}

double lp_norm(const WeightedHeight& h, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  if (coeffs.size() != h.degree() + 1)
    throw DomainError("lp_norm: expected " + std::to_string(h.degree() + 1) + " coefficients");
  const Eigen::ArrayXd scaled = (h.weights().array() * coeffs.array()).abs();
  if (h.p().is_infinite()) return scaled.maxCoeff();
  const double p = h.p().value();
  // Factor out the largest entry so large p does not overflow.
  const double top = scaled.maxCoeff();
  if (top == 0.0) return 0.0;
  return top * std::pow((scaled / top).pow(p).sum(), 1.0 / p);
}

double ball_volume(const WeightedHeight& h) {
  const int d = h.degree() + 1;
  const double weight_product = h.weights().prod();
  if (h.p().is_infinite()) return std::ldexp(1.0, d) / weight_product;
  const double p = h.p().value();
  return std::ldexp(1.0, d) * std::pow(gamma(1.0 + 1.0 / p), d) /
         (weight_product * gamma(1.0 + d / p));
}

Eigen::VectorXd bombieri_weights(int n) {
  if (n < 1) throw DomainError("bombieri_weights: degree must be >= 1");
  Eigen::VectorXd w(n + 1);
  double binom = 1.0;
  for (int i = 0; i <= n; ++i) {
    w(i) = 1.0 / std::sqrt(binom);
    binom = binom * (n - i) / (i + 1);
  }
  return w;
}

double limit_constant_c(const WeightedHeight& h) {
  return 2.0 / ((h.degree() + 1) * ball_volume(h));
}

double limit_constant_c_gamma_form(const WeightedHeight& h) {
  if (h.p().is_infinite())
    throw DomainError("the Gamma form of the limit constant needs finite p");
  const int n = h.degree();
  const double p = h.p().value();
  return h.weights().prod() * gamma((n + 1) / p) /
         (std::ldexp(1.0, n) * p * std::pow(gamma(1.0 + 1.0 / p), n + 1));
}

}  // namespace conjdist
