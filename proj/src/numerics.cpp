#include "conjdist/numerics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>
#include <thread>

#include <boost/random/sobol.hpp>

#include "conjdist/errors.hpp"

namespace conjdist {

double gamma(double x) {
  if (!(x > 0.0)) throw DomainError("gamma: argument must be positive, got " + std::to_string(x));
  return std::tgamma(x);
}

double zeta(int s) {
  if (s < 2) throw DomainError("zeta: s must be >= 2, got " + std::to_string(s));
  // Euler-Maclaurin with N = 10 and seven Bernoulli corrections; the
  // truncation error is far below double rounding for every s >= 2.
  constexpr int N = 10;
  constexpr std::array<double, 7> bernoulli = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                                               5.0 / 66, -691.0 / 2730, 7.0 / 6};
  const double sd = s;
  double tail = std::pow(N, 1.0 - sd) / (sd - 1.0) + 0.5 * std::pow(N, -sd);
  double rising = sd;  // s (s+1) ... (s+2j-2)
  double factorial = 2.0;
  for (int j = 1; j <= static_cast<int>(bernoulli.size()); ++j) {
    tail += bernoulli[j - 1] / factorial * rising * std::pow(N, -sd - 2.0 * j + 1.0);
    rising *= (sd + 2.0 * j - 1.0) * (sd + 2.0 * j);
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  double head = 0.0;
  for (int k = N - 1; k >= 1; --k) head += std::pow(k, -sd);
  return head + tail;
}

// ---------------------------------------------------------------------------

RngStream::RngStream(std::uint64_t seed, std::uint32_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream_id, 0x9e3779b9u};
  engine_.seed(seq);
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

// ---------------------------------------------------------------------------

namespace {

unsigned initial_threads() {
  if (const char* env = std::getenv("CONJDIST_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> value{initial_threads()};
  return value;
}

}  // namespace

unsigned default_threads() { return thread_setting().load(); }
void set_default_threads(unsigned threads) { thread_setting().store(std::max(1u, threads)); }

void parallel_chunks(std::size_t chunks, unsigned threads,
                     const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = default_threads();
  const std::size_t workers = std::min<std::size_t>(threads, chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) body(c);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Axis Axis::interval(double lo, double hi, double scale) {
  if (!(lo <= hi)) throw DomainError("axis interval needs lo <= hi");
  const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
  if (lo_inf && hi_inf) return real(0.0, scale);
  if (lo_inf) return upto(hi, scale);
  if (hi_inf) return from(lo, scale);
  return bounded(lo, hi);
}

// ---------------------------------------------------------------------------
// Integration engines
// ---------------------------------------------------------------------------

namespace {

/// Maps unit-cube coordinates onto the integrand's axes and multiplies by the
/// Jacobian. Points on the cube boundary carry zero weight.
class MappedIntegrand {
 public:
  explicit MappedIntegrand(const Integrand& f) : f_(f), t_(f.dimension()) {}

  double operator()(std::span<const double> u) {
    double jac = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Axis& ax = f_.axes[i];
      if (ax.kind == Axis::Kind::Bounded) {
        t_[i] = ax.lo + (ax.hi - ax.lo) * u[i];
        jac *= ax.hi - ax.lo;
      } else if (ax.kind == Axis::Kind::Real) {
        if (u[i] <= 0.0 || u[i] >= 1.0) return 0.0;
        const double theta = std::numbers::pi * (u[i] - 0.5);
        const double c = std::cos(theta);
        t_[i] = ax.center + ax.scale * std::tan(theta);
        jac *= ax.scale * std::numbers::pi / (c * c);
      } else {
        if (u[i] >= 1.0) return 0.0;
        const double theta = 0.5 * std::numbers::pi * u[i];
        const double c = std::cos(theta);
        const double offset = ax.scale * std::tan(theta);
        t_[i] = ax.kind == Axis::Kind::LowerBounded ? ax.lo + offset : ax.hi - offset;
        jac *= ax.scale * 0.5 * std::numbers::pi / (c * c);
      }
    }
    const double v = f_.f(t_);
    if (std::isnan(v)) throw EvaluationError("integrand returned NaN");
    return v == 0.0 ? 0.0 : v * jac;
  }

 private:
  const Integrand& f_;
  std::vector<double> t_;
};

struct Cell {
  std::vector<double> center;
  std::vector<double> half;
  double value = 0.0;
  double error = 0.0;
  std::size_t split_dim = 0;

  bool operator<(const Cell& o) const { return error < o.error; }
};

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

class CubatureRule {
 public:
  CubatureRule(MappedIntegrand& g, std::size_t dim, bool indicator)
      : g_(g), dim_(dim), indicator_(indicator), p_(dim) {}

  std::size_t evaluations() const { return evaluations_; }

  void apply(Cell& cell) {
    zeros_ = nonzeros_ = 0;
    if (dim_ == 1)
      kronrod(cell);
    else
      genz_malik(cell);
    if (indicator_ && zeros_ > 0 && nonzeros_ > 0)
      cell.error = std::max(cell.error, 0.5 * abs_value_);
  }

 private:
  double eval(std::span<const double> u) {
    ++evaluations_;
    const double v = g_(u);
    (v == 0.0 ? zeros_ : nonzeros_)++;
    return v;
  }

  void kronrod(Cell& cell) {
    const double c = cell.center[0];
    const double h = cell.half[0];
    auto at = [&](double x) {
      p_[0] = c + h * x;
      return eval(p_);
    };
    const double fc = at(0.0);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    double abs_sum = kWgk[7] * std::abs(fc);
    for (std::size_t j = 0; j < 7; ++j) {
      const double f1 = at(-kXgk[j]);
      const double f2 = at(kXgk[j]);
      kron += kWgk[j] * (f1 + f2);
      abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    cell.value = kron * h;
    cell.error = std::abs((kron - gauss) * h);
    abs_value_ = abs_sum * h;
    cell.split_dim = 0;
  }

  // Degree-7 Genz-Malik rule with embedded degree-5 error estimate.
  void genz_malik(Cell& cell) {
    const double d = static_cast<double>(dim_);
    const double lambda2 = std::sqrt(9.0 / 70.0);
    const double lambda4 = std::sqrt(9.0 / 10.0);
    const double lambda5 = std::sqrt(9.0 / 19.0);
    const double w1 = (12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0;
    const double w2 = 980.0 / 6561.0;
    const double w3 = (1820.0 - 400.0 * d) / 19683.0;
    const double w4 = 200.0 / 19683.0;
    const double w5 = 6859.0 / 19683.0 / std::ldexp(1.0, static_cast<int>(dim_));
    const double e1 = (729.0 - 950.0 * d + 50.0 * d * d) / 729.0;
    const double e2 = 245.0 / 486.0;
    const double e3 = (265.0 - 100.0 * d) / 1458.0;
    const double e4 = 25.0 / 729.0;

    double volume = 1.0;
    for (double h : cell.half) volume *= 2.0 * h;

    std::copy(cell.center.begin(), cell.center.end(), p_.begin());
    const double f0 = eval(p_);
    double abs_sum = std::abs(w1 * f0);

    double sum2 = 0.0, sum3 = 0.0;
    double max_diff = -1.0;
    std::size_t split = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double c = cell.center[i];
      const double h = cell.half[i];
      p_[i] = c - lambda2 * h;
      const double a1 = eval(p_);
      p_[i] = c + lambda2 * h;
      const double a2 = eval(p_);
      p_[i] = c - lambda4 * h;
      const double b1 = eval(p_);
      p_[i] = c + lambda4 * h;
      const double b2 = eval(p_);
      p_[i] = c;
      sum2 += a1 + a2;
      sum3 += b1 + b2;
      abs_sum += w2 * (std::abs(a1) + std::abs(a2)) + std::abs(w3) * (std::abs(b1) + std::abs(b2));
      const double diff = std::abs(a1 + a2 - 2.0 * f0 - (b1 + b2 - 2.0 * f0) / 7.0);
      if (diff > max_diff * (1.0 + 1e-12)) {
        max_diff = diff;
        split = i;
      }
    }

    double sum4 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i + 1; j < dim_; ++j) {
        for (double si : {-1.0, 1.0}) {
          for (double sj : {-1.0, 1.0}) {
            p_[i] = cell.center[i] + si * lambda4 * cell.half[i];
            p_[j] = cell.center[j] + sj * lambda4 * cell.half[j];
            const double v = eval(p_);
            sum4 += v;
            abs_sum += w4 * std::abs(v);
          }
        }
        p_[i] = cell.center[i];
        p_[j] = cell.center[j];
      }
    }

    double sum5 = 0.0;
    const std::size_t corners = std::size_t{1} << dim_;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      for (std::size_t i = 0; i < dim_; ++i)
        p_[i] = cell.center[i] + ((mask >> i) & 1 ? lambda5 : -lambda5) * cell.half[i];
      const double v = eval(p_);
      sum5 += v;
      abs_sum += w5 * std::abs(v);
    }

    const double res7 = volume * (w1 * f0 + w2 * sum2 + w3 * sum3 + w4 * sum4 + w5 * sum5);
    const double res5 = volume * (e1 * f0 + e2 * sum2 + e3 * sum3 + e4 * sum4);
    cell.value = res7;
    cell.error = std::abs(res7 - res5);
    cell.split_dim = split;
    abs_value_ = abs_sum * volume;
  }

  MappedIntegrand& g_;
  std::size_t dim_;
  bool indicator_;
  std::vector<double> p_;
  std::size_t evaluations_ = 0;
  std::size_t zeros_ = 0;
  std::size_t nonzeros_ = 0;
  double abs_value_ = 0.0;
};

IntegrationResult integrate_adaptive(const Integrand& f, const IntegrationOptions& opt) {
  const std::size_t dim = f.dimension();
  const std::size_t budget = opt.budget ? opt.budget : kDefaultAdaptiveBudget;
  MappedIntegrand g(f);
  CubatureRule rule(g, dim, f.indicator_support);

  // Start from a uniform grid so narrow features near the centre are seen.
  const std::size_t per_axis =
      opt.initial_cells ? opt.initial_cells : (dim == 1 ? 8 : (dim <= 3 ? 4 : 2));
  std::size_t initial = 1;
  for (std::size_t i = 0; i < dim; ++i) initial *= per_axis;

  std::vector<Cell> heap;
  heap.reserve(initial + 1024);
  for (std::size_t idx = 0; idx < initial; ++idx) {
    Cell cell;
    cell.center.resize(dim);
    cell.half.assign(dim, 0.5 / static_cast<double>(per_axis));
    std::size_t rem = idx;
    for (std::size_t i = 0; i < dim; ++i) {
      cell.center[i] = (static_cast<double>(rem % per_axis) + 0.5) / static_cast<double>(per_axis);
      rem /= per_axis;
    }
    rule.apply(cell);
    heap.push_back(std::move(cell));
  }
  std::make_heap(heap.begin(), heap.end());

  // Running totals drift when early cells carry huge errors, so they are
  // periodically rebuilt from the cells (Kahan-summed).
  double total = 0.0, total_err = 0.0;
  auto resum = [&] {
    double comp = 0.0;
    total = 0.0;
    total_err = 0.0;
    for (const Cell& c : heap) {
      const double y = c.value - comp;
      const double t = total + y;
      comp = (t - total) - y;
      total = t;
      total_err += c.error;
    }
  };
  resum();

  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  bool converged = true;
  std::size_t splits = 0;
  for (;;) {
    if (total_err <= tolerance()) {
      resum();
      if (total_err <= tolerance()) break;
    }
    if (rule.evaluations() >= budget) {
      resum();
      converged = total_err <= tolerance();
      break;
    }
    std::pop_heap(heap.begin(), heap.end());
    Cell worst = std::move(heap.back());
    heap.pop_back();
    total -= worst.value;
    total_err -= worst.error;
    const std::size_t s = worst.split_dim;
    Cell left = worst;
    Cell right = std::move(worst);
    left.half[s] *= 0.5;
    right.half[s] = left.half[s];
    left.center[s] -= left.half[s];
    right.center[s] += right.half[s];
    rule.apply(left);
    rule.apply(right);
    total += left.value + right.value;
    total_err += left.error + right.error;
    heap.push_back(std::move(left));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(std::move(right));
    std::push_heap(heap.begin(), heap.end());
    if (++splits % 4096 == 0) resum();
  }
  const double value = total, err = total_err;
  return {value, err, rule.evaluations(), converged};
}

IntegrationResult integrate_quasi_random(const Integrand& f, const IntegrationOptions& opt,
                                         RngStream rng) {
  const std::size_t dim = f.dimension();
  const std::size_t budget = opt.budget ? opt.budget : kDefaultQuasiRandomBudget;
  const unsigned reps = std::max(2u, opt.replicates);
  const std::size_t per_rep = std::max<std::size_t>(1, budget / reps);

  std::vector<double> shifts(reps * dim);
  for (double& s : shifts) s = rng.uniform();

  std::vector<double> means(reps, 0.0);
  parallel_chunks(reps, opt.threads, [&](std::size_t r) {
    boost::random::sobol qrng(dim);
    MappedIntegrand g(f);
    std::vector<double> u(dim);
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < per_rep; ++k) {
      for (std::size_t i = 0; i < dim; ++i) {
        double x = static_cast<double>(qrng()) * 0x1p-64 + shifts[r * dim + i];
        u[i] = x >= 1.0 ? x - 1.0 : x;
      }
      const double y = g(u) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    means[r] = sum / static_cast<double>(per_rep);
  });

  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= reps;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(reps - 1);
  const double err = std::sqrt(var / reps);
  return {mean, err, per_rep * reps, std::isfinite(err)};
}

}  // namespace

IntegrationResult integrate(const Integrand& f, const IntegrationOptions& options, RngStream rng) {
  if (f.dimension() == 0) throw DomainError("integrate: dimension must be >= 1");
  if (!f.f) throw DomainError("integrate: empty integrand");
  IntegrationMode mode = options.mode;
  if (mode == IntegrationMode::Auto)
    mode = f.dimension() <= 3 ? IntegrationMode::Adaptive : IntegrationMode::QuasiRandom;
  return mode == IntegrationMode::Adaptive ? integrate_adaptive(f, options)
                                           : integrate_quasi_random(f, options, rng);
}

}  // namespace conjdist
