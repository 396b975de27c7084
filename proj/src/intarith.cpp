#include "conjdist/intarith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace conjdist {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 eval_at(const IntPoly& q, std::int64_t x) {
  i128 acc = 0;
  for (int i = q.degree(); i >= 0; --i) acc = acc * x + q[i];
  return acc;
}

// b^n q(c / b) == 0, i.e. c/b is a root.
bool has_rational_root(const IntPoly& q, std::int64_t c, std::int64_t b) {
  // Homogeneous Horner: sum a_i c^i b^(n-i).
  i128 acc = q[q.degree()];
  i128 bpow = 1;
  for (int i = q.degree() - 1; i >= 0; --i) {
    bpow *= b;
    acc = acc * c + static_cast<i128>(q[i]) * bpow;
  }
  return acc == 0;
}

bool has_linear_factor(const IntPoly& q) {
  const std::int64_t a0 = q[0];
  if (a0 == 0) return true;
  const double cauchy = 1.0 + q.coeffs().template cast<double>().head(q.degree()).cwiseAbs().maxCoeff() /
                                  std::abs(static_cast<double>(q.leading()));
  for (std::int64_t b : divisors(q.leading())) {
    for (std::int64_t c : divisors(a0)) {
      if (static_cast<double>(c) / static_cast<double>(b) > cauchy) break;
      if (std::gcd(b, c) != 1) continue;
      if (has_rational_root(q, c, b) || has_rational_root(q, -c, b)) return true;
    }
  }
  return false;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Searches for a factor of exact degree d >= 2 by Kronecker's method: a
// factor g takes values dividing q(x) at every integer x, so g is fixed by
// its values at d + 1 points. Candidates are filtered by the Mignotte
// coefficient bound and the edge-coefficient divisibility conditions before
// the exact division test.
bool has_factor_of_degree(const IntPoly& q, int d) {
  struct Sample {
    std::int64_t x;
    std::vector<std::int64_t> divs;
  };
  std::vector<Sample> samples;
  for (std::int64_t step = 0; samples.size() < static_cast<std::size_t>(2 * d + 4); ++step) {
    for (int side = 0; side < (step == 0 ? 1 : 2); ++side) {
      const std::int64_t x = side ? -step : step;
      const i128 v = eval_at(q, x);
      if (v == 0) return true;  // linear factor (z - x)
      if (abs128(v) > static_cast<i128>(INT64_MAX)) continue;
      samples.push_back({x, divisors(static_cast<std::int64_t>(v))});
    }
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.divs.size() < b.divs.size(); });
  samples.resize(d + 1);

  // Lagrange basis numerators L_j(z) = prod_{i != j} (z - x_i) with integer
  // coefficients, and their denominators prod_{i != j} (x_j - x_i).
  std::vector<std::vector<i128>> basis(d + 1);
  std::vector<i128> denom(d + 1);
  i128 common = 1;
  for (int j = 0; j <= d; ++j) {
    std::vector<i128> c{1};
    i128 den = 1;
    for (int i = 0; i <= d; ++i) {
      if (i == j) continue;
      std::vector<i128> next(c.size() + 1, 0);
      for (std::size_t t = 0; t < c.size(); ++t) {
        next[t + 1] += c[t];
        next[t] -= c[t] * samples[i].x;
      }
      c = std::move(next);
      den *= samples[j].x - samples[i].x;
    }
    basis[j] = std::move(c);
    denom[j] = den;
    const i128 g = std::gcd(static_cast<std::int64_t>(abs128(common)),
                            static_cast<std::int64_t>(abs128(den)));
    common = common / g * abs128(den);
  }

  const double norm2 = std::sqrt(q.coeffs().template cast<double>().squaredNorm());
  std::vector<double> bound(d + 1);
  for (int j = 0; j <= d; ++j)
    bound[j] = binomial(d - 1, j) * norm2 + binomial(d - 1, j - 1) * std::abs(double(q.leading()));

  std::vector<i128> numer(d + 1);
  std::vector<std::size_t> pick(d + 1, 0);
  std::vector<int> sign(d + 1, 1);
  // Odometer over (divisor index, sign) per sample; the first sample's sign
  // is fixed to +1 since g and -g are the same factor.
  const std::size_t total_states = [&] {
    std::size_t t = 1;
    for (int j = 0; j <= d; ++j) t *= samples[j].divs.size() * (j == 0 ? 1 : 2);
    return t;
  }();
  for (std::size_t state = 0; state < total_states; ++state) {
    std::size_t rem = state;
    for (int j = 0; j <= d; ++j) {
      const std::size_t base = samples[j].divs.size();
      pick[j] = rem % base;
      rem /= base;
      if (j > 0) {
        sign[j] = (rem % 2) ? -1 : 1;
        rem /= 2;
      }
    }
    std::fill(numer.begin(), numer.end(), 0);
    for (int j = 0; j <= d; ++j) {
      const i128 v = static_cast<i128>(sign[j]) * samples[j].divs[pick[j]];
      const i128 scale = v * (common / denom[j]);
      for (int t = 0; t <= d; ++t) numer[t] += scale * basis[j][t];
    }
    if (numer[d] == 0) continue;
    bool ok = true;
    IntPoly::Coefficients g(d + 1);
    for (int t = 0; t <= d && ok; ++t) {
      if (numer[t] % common != 0) {
        ok = false;
        break;
      }
      const i128 c = numer[t] / common;
      if (static_cast<double>(abs128(c)) > bound[t] + 0.5) ok = false;
      g(t) = static_cast<std::int64_t>(c);
    }
    if (!ok) continue;
    if (q.leading() % g(d) != 0) continue;
    if (g(0) == 0 || q[0] % g(0) != 0) continue;
    if (divides_exactly(q, IntPoly(g))) return true;
  }
  return false;
}

}  // namespace

std::vector<std::int64_t> divisors(std::int64_t v) {
  std::uint64_t m = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  std::vector<std::int64_t> small, large;
  for (std::uint64_t k = 1; k * k <= m; ++k) {
    if (m % k == 0) {
      small.push_back(static_cast<std::int64_t>(k));
      if (k != m / k) large.push_back(static_cast<std::int64_t>(m / k));
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

bool divides_exactly(const IntPoly& a, const IntPoly& b, IntPoly* quotient) {
  const int n = a.degree();
  const int d = b.degree();
  if (d > n) return false;
  std::vector<i128> rem(a.coeffs().data(), a.coeffs().data() + n + 1);
  IntPoly::Coefficients quot(n - d + 1);
  for (int k = n - d; k >= 0; --k) {
    const i128 top = rem[k + d];
    if (top % b.leading() != 0) return false;
    const i128 c = top / b.leading();
    quot(k) = static_cast<std::int64_t>(c);
    for (int i = 0; i <= d; ++i) rem[k + i] -= c * b[i];
  }
  for (int i = 0; i < d; ++i)
    if (rem[i] != 0) return false;
  if (quotient) *quotient = IntPoly(quot);
  return true;
}

std::int64_t content(const IntPoly& q) {
  std::int64_t g = 0;
  for (int i = 0; i <= q.degree(); ++i) g = std::gcd(g, q[i] < 0 ? -q[i] : q[i]);
  return g;
}

bool is_irreducible(const IntPoly& q) {
  const int n = q.degree();
  if (n < 1) throw DomainError("is_irreducible: degree must be >= 1");
  if (n > kMaxIrreducibleDegree)
    throw UnsupportedError("is_irreducible: degree " + std::to_string(n) + " exceeds cap " +
                           std::to_string(kMaxIrreducibleDegree));
  if (q.coeffs().cwiseAbs().maxCoeff() > kMaxIrreducibleCoefficient)
    throw UnsupportedError("is_irreducible: coefficient magnitude exceeds " +
                           std::to_string(kMaxIrreducibleCoefficient));
  if (n == 1) return true;
  if (has_linear_factor(q)) return false;
  for (int d = 2; d <= n / 2; ++d)
    if (has_factor_of_degree(q, d)) return false;
  return true;
}

PrimalityVerdict is_prime_poly(const IntPoly& q) {
  PrimalityVerdict v;
  v.primitive = content(q) == 1;
  v.leading_positive = q.leading() > 0;
  v.irreducible = is_irreducible(q);
  v.prime = v.primitive && v.irreducible && v.leading_positive;
  return v;
}

}  // namespace conjdist
