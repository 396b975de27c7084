#include "conjdist/counting.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>

#include "conjdist/density.hpp"
#include "conjdist/intarith.hpp"
#include "conjdist/numerics.hpp"

namespace conjdist {

namespace {

constexpr double kNormSlack = 1e-12;

class BallWalker {
 public:
  BallWalker(const WeightedHeight& h, double Q, const std::function<void(const IntPoly&)>& visit)
      : h_(h), Q_(Q), visit_(visit), coeffs_(Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(h.degree() + 1)) {
    infinite_ = h.p().is_infinite();
    p_ = h.p().value();
    budget_ = infinite_ ? 0.0 : std::pow(Q, p_);
  }

  // Largest |a_i| allowed by the remaining budget.
  std::int64_t bound(int i, double remaining) const {
    const double w = h_.weights()(i);
    const double r = infinite_ ? Q_ / w : std::pow(std::max(remaining, 0.0), 1.0 / p_) / w;
    return static_cast<std::int64_t>(std::floor(r * (1.0 + kNormSlack)));
  }

  std::int64_t leading_bound() const { return bound(h_.degree(), budget_); }

  // All completions with a_n fixed.
  void run_with_leading(std::int64_t an) {
    const int n = h_.degree();
    coeffs_(n) = an;
    recurse(n - 1, remaining_after(n, an, budget_));
  }

 private:
  double remaining_after(int i, std::int64_t a, double remaining) const {
    if (infinite_) return 0.0;
    return remaining - std::pow(std::abs(h_.weights()(i) * static_cast<double>(a)), p_);
  }

  void recurse(int i, double remaining) {
    if (i < 0) {
      visit_(IntPoly(coeffs_));
      return;
    }
    const std::int64_t b = bound(i, remaining);
    for (std::int64_t a = -b; a <= b; ++a) {
      coeffs_(i) = a;
      recurse(i - 1, remaining_after(i, a, remaining));
    }
  }

  const WeightedHeight& h_;
  double Q_;
  const std::function<void(const IntPoly&)>& visit_;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> coeffs_;
  bool infinite_;
  double p_;
  double budget_;
};

template <typename F>
void choose_ordered(int count, int available, std::vector<int>& picked, std::vector<bool>& used,
                    F&& leaf) {
  if (static_cast<int>(picked.size()) == count) {
    leaf();
    return;
  }
  for (int i = 0; i < available; ++i) {
    if (used[i]) continue;
    used[i] = true;
    picked.push_back(i);
    choose_ordered(count, available, picked, used, leaf);
    picked.pop_back();
    used[i] = false;
  }
}

}  // namespace

void enumerate_height_ball(const WeightedHeight& h, double Q,
                           const std::function<void(const IntPoly&)>& visit,
                           bool positive_leading) {
  if (!(Q >= 0.0)) throw DomainError("height bound Q must be non-negative");
  BallWalker walker(h, Q, visit);
  const std::int64_t top = walker.leading_bound();
  for (std::int64_t an = positive_leading ? 1 : -top; an <= top; ++an)
    if (an != 0) walker.run_with_leading(an);
}

void enumerate_prime(const WeightedHeight& h, double Q,
                     const std::function<void(const IntPoly&)>& visit) {
  enumerate_height_ball(
      h, Q,
      [&](const IntPoly& q) {
        if (is_prime_poly(q).prime) visit(q);
      },
      true);
}

std::uint64_t tuples_in_region(const ClassifiedRoots& roots, const Region& B) {
  const int k = B.k, l = B.l;
  const int nr = static_cast<int>(roots.reals.size());
  const int nu = static_cast<int>(roots.uppers.size());
  if (k > nr || l > nu) return 0;
  std::uint64_t count = 0;
  std::vector<double> x(k);
  std::vector<Complex> z(l);
  std::vector<int> pr, pu;
  std::vector<bool> ur(nr, false), uu(nu, false);
  choose_ordered(k, nr, pr, ur, [&] {
    for (int i = 0; i < k; ++i) x[i] = roots.reals[pr[i]];
    choose_ordered(l, nu, pu, uu, [&] {
      for (int i = 0; i < l; ++i) z[i] = roots.uppers[pu[i]];
      if (B.contains(x, z)) ++count;
    });
  });
  return count;
}

void CountReport::merge(const CountReport& o) {
  phi += o.phi;
  primes_scanned += o.primes_scanned;
  scanned += o.scanned;
  reducible_count += o.reducible_count;
  root_failures += o.root_failures;
  for (const auto& [m, c] : o.multiplicity) multiplicity[m] += c;
}

CountReport phi_count(const WeightedHeight& h, double Q, const Region& B,
                      const CountOptions& options) {
  B.validate(h.degree());
  if (!(Q >= 0.0)) throw DomainError("height bound Q must be non-negative");
  const auto start = std::chrono::steady_clock::now();

  const std::function<void(const IntPoly&)> noop = [](const IntPoly&) {};
  const std::int64_t top = BallWalker(h, Q, noop).leading_bound();
  std::vector<CountReport> partial(top > 0 ? top : 0);
  const unsigned threads = options.threads ? options.threads : default_threads();

  parallel_chunks(partial.size(), threads, [&](std::size_t chunk) {
    CountReport& r = partial[chunk];
    const std::function<void(const IntPoly&)> visit = [&](const IntPoly& q) {
      r.scanned += 2;
      if (!is_irreducible(q)) {
        r.reducible_count += 2;
        return;
      }
      if (content(q) != 1) return;
      ++r.primes_scanned;
      std::uint64_t m = 0;
      try {
        m = tuples_in_region(find_roots(q.cast<double>(), options.real_tol), B);
      } catch (const RootFindingError&) {
        ++r.root_failures;
        return;
      }
      r.phi += m;
      ++r.multiplicity[m];
    };
    BallWalker walker(h, Q, visit);
    walker.run_with_leading(static_cast<std::int64_t>(chunk) + 1);
  });

  CountReport total;
  total.Q = Q;
  for (const CountReport& r : partial) total.merge(r);
  total.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return total;
}

int rate_log_exponent(int n, int l) { return (n == 2 && l == 0) ? 1 : 0; }

ConvergenceTable convergence_table(const WeightedHeight& h, const Region& B,
                                   const std::vector<double>& Q_list,
                                   const CountOptions& options) {
  for (std::size_t i = 1; i < Q_list.size(); ++i)
    if (!(Q_list[i] > Q_list[i - 1])) throw DomainError("Q list must be strictly ascending");
  B.validate(h.degree());
  const int n = h.degree();
  ConvergenceTable table;
  table.limit = limit_integral(h, B);
  table.chi = rate_log_exponent(n, B.l);
  const double wmin = h.weights().minCoeff();
  for (double Q : Q_list) {
    if (Q < wmin) continue;
    const CountReport r = phi_count(h, Q, B, options);
    ConvergenceRow row;
    row.Q = Q;
    row.phi = r.phi;
    row.ratio = static_cast<double>(r.phi) / std::pow(Q, n + 1);
    row.limit = table.limit;
    row.deviation = table.limit != 0.0 ? (row.ratio - table.limit) / table.limit : row.ratio;
    const double log_factor = table.chi ? std::log(Q) : 1.0;
    row.envelope_constant = log_factor > 0.0 ? std::abs(row.deviation) * Q / log_factor : 0.0;
    row.reducible_count = r.reducible_count;
    row.root_failures = r.root_failures;
    row.runtime = r.runtime;
    table.rows.push_back(row);
  }
  return table;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table, bool with_runtime) {
  out << "Q,phi,phi_over_Qn1,limit,deviation,reducible_count,runtime_s\n";
  out << std::setprecision(12);
  for (const ConvergenceRow& r : table.rows) {
    out << r.Q << ',' << r.phi << ',' << r.ratio << ',' << r.limit << ',' << r.deviation << ','
        << r.reducible_count << ',';
    if (with_runtime)
      out << r.runtime;
    else
      out << "NA";
    out << '\n';
  }
}

}  // namespace conjdist
