#include "conjdist/region.hpp"

#include <cmath>
#include <string>

namespace conjdist {

namespace {
// Closed boxes: a root on the boundary counts as inside even after rounding.
constexpr double kBoundarySlack = 1e-9;
}  // namespace

bool Interval::contains(double x) const {
  const double slack = kBoundarySlack * (1.0 + std::abs(x));
  return x >= lo - slack && x <= hi + slack;
}

bool RegionBox::contains(const std::vector<double>& x, const std::vector<Complex>& z) const {
  for (std::size_t i = 0; i < reals.size(); ++i)
    if (!reals[i].contains(x[i])) return false;
  for (std::size_t i = 0; i < uppers.size(); ++i)
    if (!uppers[i].contains(z[i])) return false;
  return true;
}

double RegionBox::measure() const {
  double m = 1.0;
  for (const Interval& I : reals) m *= I.length();
  for (const UpperRect& R : uppers) m *= R.re.length() * R.im.length();
  return m;
}

Region Region::real_interval(double lo, double hi) {
  Region r;
  r.k = 1;
  r.boxes.push_back({{Interval{lo, hi}}, {}});
  return r;
}

Region Region::whole_real_line() { return real_interval(-INFINITY, INFINITY); }

Region Region::upper_rect(double re_lo, double re_hi, double im_lo, double im_hi) {
  Region r;
  r.l = 1;
  r.boxes.push_back({{}, {UpperRect{{re_lo, re_hi}, {im_lo, im_hi}}}});
  return r;
}

void Region::validate(int n) const {
  if (k < 0 || l < 0 || k + 2 * l <= 0 || k + 2 * l > n)
    throw DomainError("region needs 0 < k + 2l <= n (k=" + std::to_string(k) +
                      ", l=" + std::to_string(l) + ", n=" + std::to_string(n) + ")");
  for (const RegionBox& b : boxes) {
    if (static_cast<int>(b.reals.size()) != k || static_cast<int>(b.uppers.size()) != l)
      throw DomainError("region box has the wrong number of slots");
    for (const Interval& I : b.reals)
      if (!(I.lo <= I.hi)) throw DomainError("region interval has lo > hi");
    for (const UpperRect& R : b.uppers) {
      if (!(R.re.lo <= R.re.hi) || !(R.im.lo <= R.im.hi))
        throw DomainError("region rectangle has lo > hi");
      if (R.im.lo < 0.0) throw DomainError("region rectangle must lie in the upper half-plane");
    }
  }
}

bool Region::contains(const std::vector<double>& x, const std::vector<Complex>& z) const {
  for (const RegionBox& b : boxes)
    if (b.contains(x, z)) return true;
  return false;
}

}  // namespace conjdist
