#include "conjdist/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "conjdist/acceptance.hpp"
#include "conjdist/counting.hpp"
#include "conjdist/density.hpp"
#include "conjdist/errors.hpp"
#include "conjdist/intarith.hpp"
#include "conjdist/lattice.hpp"
#include "conjdist/mcsim.hpp"

namespace conjdist {

namespace {

using json = nlohmann::json;

const std::map<std::string, Command> kCommands = {
    {"count", Command::Count},     {"density", Command::Density},   {"simulate", Command::Simulate},
    {"lattice", Command::Lattice}, {"prob-real", Command::ProbReal}, {"verify", Command::Verify},
};

std::string command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

// Keys accepted in config files; each mirrors the flag --key.
const std::set<std::string> kConfigKeys = {
    "command", "n",        "p",         "weights", "k",     "l",      "box",    "Q",
    "draws",   "seed",     "budget",    "tol",     "threads", "output", "timing", "grid",
    "im-grid", "at",       "method",    "estimator", "source", "bins", "d",      "region",
    "quick",
};
const std::set<std::string> kFlagKeys = {"timing", "quick"};

// Raw option values as CLI11 fills them.
struct Raw {
  int n = 1;
  std::string p = "inf";
  std::vector<std::string> weights{"ones"};
  int k = 1;
  int l = 0;
  std::vector<std::vector<std::string>> boxes;
  std::vector<double> Q;
  std::uint64_t draws = 100'000;
  std::uint64_t seed = 1;
  std::size_t budget = 0;
  double tol = 1e-8;
  unsigned threads = 0;
  std::string output;
  bool timing = false;
  std::vector<double> grid, im_grid, at;
  std::string method = "auto";
  std::string estimator = "density";
  std::string source = "G";
  std::vector<double> bins{-3.0, 3.0, 20.0};
  int d = 2;
  std::string region = "cube";
  bool quick = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw UsageError(field, "cannot parse number '" + text + "'");
  }
}

struct ConfigEntry {
  std::string key;
  std::vector<std::string> values;
};

std::vector<ConfigEntry> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config", "cannot open '" + path + "'");
  std::vector<ConfigEntry> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config", "line " + std::to_string(number) + ": expected key = value");
    ConfigEntry e{trim(line.substr(0, eq)), {}};
    if (!kConfigKeys.count(e.key)) throw UsageError(e.key, "unknown config key");
    std::string value = line.substr(eq + 1);
    std::replace(value.begin(), value.end(), ',', ' ');
    std::istringstream tokens(value);
    for (std::string t; tokens >> t;) e.values.push_back(t);
    if (e.values.empty()) throw UsageError(e.key, "missing value");
    entries.push_back(std::move(e));
  }
  return entries;
}

void add_common(CLI::App* app, Raw& r) {
  app->add_option("--n", r.n, "polynomial degree");
  app->add_option("--p", r.p, "norm exponent >= 1 or inf");
  app->add_option("--weights", r.weights, "ones | bombieri | w_0 ... w_n")->expected(1, -1);
  app->add_option("--k", r.k, "real slots");
  app->add_option("--l", r.l, "upper half-plane slots");
  app->add_option("--box", r.boxes,
                  "region box: lo hi per real slot, then re_lo re_hi im_lo im_hi per complex slot")
      ->expected(1, -1);
  app->add_option("--Q", r.Q, "height bound(s), ascending")->expected(1, -1);
  app->add_option("--draws", r.draws, "Monte Carlo draws");
  app->add_option("--seed", r.seed, "random seed");
  app->add_option("--budget", r.budget, "integration evaluation budget (0: default)");
  app->add_option("--tol", r.tol, "integration tolerance (absolute and relative)");
  app->add_option("--threads", r.threads, "worker threads (0: CONJDIST_THREADS or all cores)");
  app->add_option("--output", r.output, "output file (default: standard output)");
  app->add_flag("--timing", r.timing, "record runtimes in the output");
}

JobConfig validate(Command command, const Raw& r) {
  JobConfig job;
  job.command = command;
  if (r.n < 1) throw UsageError("n", "degree must be >= 1");
  job.n = r.n;
  try {
    job.p = PNorm::parse(r.p);
  } catch (const DomainError& e) {
    throw UsageError("p", e.what());
  }

  if (r.weights.size() == 1 && r.weights[0] == "ones") {
    job.weights = Eigen::VectorXd::Ones(r.n + 1);
  } else if (r.weights.size() == 1 && r.weights[0] == "bombieri") {
    job.weights = bombieri_weights(r.n);
  } else {
    std::vector<double> w;
    for (const std::string& s : r.weights) {
      std::string t = s;
      std::replace(t.begin(), t.end(), ',', ' ');
      std::istringstream in(t);
      for (std::string part; in >> part;) w.push_back(parse_number("weights", part));
    }
    if (static_cast<int>(w.size()) != r.n + 1)
      throw UsageError("weights", "expected " + std::to_string(r.n + 1) + " values, got " +
                                      std::to_string(w.size()));
    for (double v : w)
      if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("weights", "weights must be positive");
    job.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
  job.weights_spec = r.weights.size() == 1 ? r.weights[0] : "explicit";

  const bool needs_slots = command == Command::Count || command == Command::Density ||
                           (command == Command::Simulate && r.estimator == "moment");
  if (r.k < 0) throw UsageError("k", "must be >= 0");
  if (r.l < 0) throw UsageError("l", "must be >= 0");
  if (needs_slots && (r.k + 2 * r.l <= 0 || r.k + 2 * r.l > r.n))
    throw UsageError("k", "need 0 < k + 2l <= n");
  job.k = r.k;
  job.l = r.l;

  job.region.k = r.k;
  job.region.l = r.l;
  for (const auto& tokens : r.boxes) {
    std::vector<double> v;
    for (const std::string& t : tokens) v.push_back(parse_number("box", t));
    if (static_cast<int>(v.size()) != 2 * r.k + 4 * r.l)
      throw UsageError("box", "expected " + std::to_string(2 * r.k + 4 * r.l) + " numbers, got " +
                                  std::to_string(v.size()));
    RegionBox b;
    std::size_t i = 0;
    for (int s = 0; s < r.k; ++s, i += 2) b.reals.push_back({v[i], v[i + 1]});
    for (int s = 0; s < r.l; ++s, i += 4) b.uppers.push_back({{v[i], v[i + 1]}, {v[i + 2], v[i + 3]}});
    job.region.boxes.push_back(b);
  }
  if (needs_slots && command != Command::Density) {
    if (job.region.boxes.empty()) throw UsageError("box", "at least one box is required");
    try {
      job.region.validate(r.n);
    } catch (const DomainError& e) {
      throw UsageError("box", e.what());
    }
  }

  if (command == Command::Count) {
    if (r.Q.empty()) throw UsageError("Q", "at least one height bound is required");
    if (r.n > kMaxIrreducibleDegree) throw UsageError("n", "counting supports n <= 6");
  }
  for (std::size_t i = 0; i < r.Q.size(); ++i) {
    if (!(r.Q[i] > 0.0)) throw UsageError("Q", "height bounds must be positive");
    if (i > 0 && !(r.Q[i] > r.Q[i - 1])) throw UsageError("Q", "height bounds must be ascending");
  }
  job.Q_list = r.Q;

  if (r.draws < 1) throw UsageError("draws", "must be >= 1");
  if (!(r.tol > 0.0)) throw UsageError("tol", "must be positive");
  job.draws = r.draws;
  job.seed = r.seed;
  job.budget = r.budget;
  job.tolerance = r.tol;
  job.threads = r.threads;
  job.output = r.output;
  job.timing = r.timing;

  auto check_range = [](const std::string& field, const std::vector<double>& g) {
    if (g.empty()) return;
    if (g.size() != 3 || !(g[1] >= g[0]) || !(g[2] > 0.0))
      throw UsageError(field, "expected lo hi step with lo <= hi and step > 0");
  };
  check_range("grid", r.grid);
  check_range("im-grid", r.im_grid);
  job.grid = r.grid;
  job.im_grid = r.im_grid;
  job.at = r.at;
  static const std::set<std::string> methods = {"auto", "closed", "general", "projective", "reduced"};
  if (!methods.count(r.method)) throw UsageError("method", "unknown method '" + r.method + "'");
  job.method = r.method;
  if (command == Command::Density) {
    if (r.n > kMaxDensityDegree) throw UsageError("n", "density supports n <= 15");
    if (!r.at.empty()) {
      if (static_cast<int>(r.at.size()) != r.k + 2 * r.l)
        throw UsageError("at", "expected k reals followed by l (re, im) pairs");
    } else {
      if (r.grid.empty()) throw UsageError("grid", "a grid or --at point is required");
      if (r.k + r.l != 1) throw UsageError("grid", "grids need k + l = 1; use --at otherwise");
      if (r.l == 1 && r.im_grid.empty()) throw UsageError("im-grid", "required for complex slots");
    }
    if (r.method == "closed" && r.k + 2 * r.l != r.n)
      throw UsageError("method", "the closed form needs k + 2l = n");
    if (r.method == "reduced" && r.k + r.l != 1)
      throw UsageError("method", "reduced forms exist for (k, l) = (1, 0) and (0, 1)");
  }

  static const std::set<std::string> estimators = {"density", "count", "moment", "equivalence"};
  if (!estimators.count(r.estimator)) throw UsageError("estimator", "unknown estimator '" + r.estimator + "'");
  if (r.source != "G" && r.source != "ball") throw UsageError("source", "expected G or ball");
  if (r.bins.size() != 3 || !(r.bins[1] > r.bins[0]) || !(r.bins[2] >= 1.0) ||
      r.bins[2] != std::floor(r.bins[2]))
    throw UsageError("bins", "expected lo hi count with lo < hi and integer count >= 1");
  job.estimator = r.estimator;
  job.source = r.source;
  job.bins = r.bins;

  if (command == Command::Lattice) {
    if (r.d < 1) throw UsageError("d", "dimension must be >= 1");
    if (r.Q.size() != 1) throw UsageError("Q", "lattice counts take exactly one Q");
  }
  if (r.region != "cube" && r.region != "ball") throw UsageError("region", "expected cube or ball");
  job.d = r.d;
  job.lattice_region = r.region;
  job.quick = r.quick;
  return job;
}

void write_metadata(std::ostream& out, const JobConfig& job, double seconds) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(job.hash()));
  out << "# config_hash=" << hash << " runtime_s=";
  if (job.timing)
    out << std::setprecision(6) << seconds;
  else
    out << "NA";
  out << '\n';
}

json result_json(const IntegrationResult& r) {
  return {{"value", r.value}, {"error_estimate", r.error_estimate},
          {"evaluations", r.evaluations}, {"converged", r.converged}};
}

IntegrationOptions integration_options(const JobConfig& job) {
  IntegrationOptions o;
  o.budget = job.budget;
  o.abs_tol = job.tolerance;
  o.rel_tol = job.tolerance;
  o.threads = job.threads;
  return o;
}

// ---------------------------------------------------------------------------

int run_count(const JobConfig& job, std::ostream& out) {
  const ConvergenceTable t =
      convergence_table(job.height(), job.region, job.Q_list, {job.threads});
  write_convergence_csv(out, t, job.timing);
  double total = 0.0;
  std::uint64_t failures = 0;
  for (const ConvergenceRow& r : t.rows) {
    total += r.runtime;
    failures += r.root_failures;
  }
  write_metadata(out, job, total);
  return failures ? 1 : 0;
}

IntegrationResult evaluate_density(const JobConfig& job, const DensityQuery& q,
                                   const IntegrationOptions& o) {
  std::string method = job.method;
  if (method == "auto") method = q.k() + 2 * q.l() == job.n ? "closed" : "general";
  if (method == "closed") return {rho_closed_top(q), 0.0, 1, true};
  if (method == "projective") return rho_projective(q, o);
  if (method == "reduced")
    return q.k() == 1 ? rho_real_density(q.h, q.config.reals[0], o)
                      : rho_complex_density(q.h, q.config.uppers[0], o);
  return rho_general(q, o);
}

std::vector<double> grid_points(const std::vector<double>& g) {
  std::vector<double> v;
  const long steps = std::lround(std::floor((g[1] - g[0]) / g[2] + 1e-9));
  for (long i = 0; i <= steps; ++i) v.push_back(g[0] + i * g[2]);
  return v;
}

int run_density(const JobConfig& job, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const WeightedHeight h = job.height();
  const std::string method =
      job.method == "auto" ? (job.k + 2 * job.l == job.n ? "closed" : "general") : job.method;
  IntegrationOptions o = integration_options(job);

  if (!job.at.empty()) {
    DensityQuery q{h, {}};
    for (int i = 0; i < job.k; ++i) q.config.reals.push_back(job.at[i]);
    for (int i = 0; i < job.l; ++i)
      q.config.uppers.emplace_back(job.at[job.k + 2 * i], job.at[job.k + 2 * i + 1]);
    const IntegrationResult r = evaluate_density(job, q, o);
    json j = {{"command", "density"}, {"method", method}, {"at", job.at}, {"rho", result_json(r)}};
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(job.hash()));
    j["config_hash"] = hash;
    out << j.dump(2) << '\n';
    return r.converged ? 0 : 1;
  }

  struct Point {
    double re, im;
  };
  std::vector<Point> points;
  if (job.k == 1) {
    for (double x : grid_points(job.grid)) points.push_back({x, 0.0});
  } else {
    for (double re : grid_points(job.grid))
      for (double im : grid_points(job.im_grid)) points.push_back({re, im});
  }
  std::vector<IntegrationResult> results(points.size());
  o.threads = 1;  // parallel over grid points instead
  parallel_chunks(points.size(), job.threads ? job.threads : default_threads(), [&](std::size_t i) {
    DensityQuery q{h, {}};
    if (job.k == 1)
      q.config.reals.push_back(points[i].re);
    else
      q.config.uppers.emplace_back(points[i].re, points[i].im);
    results[i] = evaluate_density(job, q, o);
  });

  out << (job.k == 1 ? "x,rho,err,method\n" : "re,im,rho,err,method\n") << std::setprecision(12);
  bool ok = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << points[i].re << ',';
    if (job.k != 1) out << points[i].im << ',';
    out << results[i].value << ',' << results[i].error_estimate << ',' << method << '\n';
    ok = ok && results[i].converged;
  }
  write_metadata(out, job,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return ok ? 0 : 1;
}

int run_simulate(const JobConfig& job, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const WeightedHeight h = job.height();
  const RngStream rng(job.seed);
  const McOptions mc{job.draws,
                     job.source == "ball" ? CoefficientSource::UniformBall : CoefficientSource::G,
                     job.threads};
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(job.hash()));

  if (job.estimator == "density") {
    const auto bins = uniform_bins(job.bins[0], job.bins[1], static_cast<int>(job.bins[2]));
    const auto est = empirical_real_density(h, bins, mc, rng);
    std::vector<double> theory;
    for (const Interval& I : bins)
      theory.push_back(integrate_rho(h, Region::real_interval(I.lo, I.hi), integration_options(job)).value /
                       I.length());
    write_histogram_csv(out, est, theory);
    write_metadata(out, job, elapsed());
    return 0;
  }
  if (job.estimator == "count") {
    const auto dist = empirical_real_count_dist(h, mc, rng);
    out << "real_zeros,probability,std_error\n" << std::setprecision(12);
    for (std::size_t r = 0; r < dist.size(); ++r)
      out << r << ',' << dist[r].estimate << ',' << dist[r].std_error << '\n';
    write_metadata(out, job, elapsed());
    return 0;
  }
  if (job.estimator == "moment") {
    const RegionBox& box = job.region.boxes.front();
    const Estimate e = empirical_mixed_moment(h, box.reals, box.uppers, mc, rng);
    const IntegrationResult theory =
        integrate_rho(h, Region{job.k, job.l, {box}}, integration_options(job));
    json j = {{"command", "simulate"}, {"estimator", "moment"},
              {"estimate", e.estimate}, {"std_error", e.std_error},
              {"theory", result_json(theory)}, {"config_hash", hash}};
    out << j.dump(2) << '\n';
    return theory.converged ? 0 : 1;
  }
  const auto bins = uniform_bins(job.bins[0], job.bins[1], static_cast<int>(job.bins[2]));
  const EquivalenceReport rep = ball_vs_G_root_equivalence(h, job.draws, rng, bins, job.threads);
  json j = {{"command", "simulate"}, {"estimator", "equivalence"}, {"count_z", rep.count_z},
            {"bin_z", rep.bin_z}, {"pass", rep.pass}, {"config_hash", hash}};
  out << j.dump(2) << '\n';
  return 0;
}

int run_lattice(const JobConfig& job, std::ostream& out) {
  const LatticeRegion A = job.lattice_region == "cube" ? LatticeRegion::cube(job.d, -1.0, 1.0)
                                                       : LatticeRegion::lp_ball(job.d, job.p);
  const double Q = job.Q_list.front();
  const std::uint64_t all = count_integer_points(A, Q, job.threads);
  const CoprimeCount cc = count_coprime_points(A, Q, CoprimeMethod::Auto, job.threads);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(job.hash()));
  json j = {{"command", "lattice"},
            {"d", job.d},
            {"Q", Q},
            {"region", job.lattice_region},
            {"lambda", all},
            {"lambda_star", cc.value},
            {"mobius", cc.mobius},
            {"direct", cc.direct ? json(*cc.direct) : json(nullptr)},
            {"lambda_star_over_Qd", static_cast<double>(cc.value) / std::pow(Q, job.d)},
            {"config_hash", hash}};
  if (job.lattice_region == "cube" && job.d >= 2)
    j["expected_limit"] = std::ldexp(1.0, job.d) / zeta(job.d);
  out << j.dump(2) << '\n';
  return 0;
}

int run_prob_real(const JobConfig& job, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const WeightedHeight h = job.height();
  const auto dist = empirical_real_count_dist(h, {job.draws, CoefficientSource::G, job.threads},
                                              RngStream(job.seed, 1));
  out << "l,real_zeros,quadrature,err,monte_carlo,mc_err\n" << std::setprecision(12);
  bool ok = true;
  for (int l = 0; 2 * l <= job.n; ++l) {
    const IntegrationResult r =
        prob_real_count(h, l, integration_options(job), RngStream(job.seed, 100 + l));
    ok = ok && r.converged;
    const int real = job.n - 2 * l;
    out << l << ',' << real << ',' << r.value << ',' << r.error_estimate << ','
        << dist[real].estimate << ',' << dist[real].std_error << '\n';
  }
  write_metadata(out, job,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return ok ? 0 : 1;
}

int run_verify(const JobConfig& job, std::ostream& out) {
  AcceptanceOptions o;
  o.level = job.quick ? AcceptanceLevel::Quick : AcceptanceLevel::Full;
  o.threads = job.threads;
  bool ok = true;
  run_acceptance(o, [&](const CriterionResult& r) {
    out << format_line(r) << std::endl;
    ok = ok && r.pass;
  });
  return ok ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string JobConfig::canonical() const {
  std::ostringstream s;
  s << std::setprecision(17) << "command=" << command_name(command) << ";n=" << n
    << ";p=" << p.to_string() << ";w=";
  for (Eigen::Index i = 0; i < weights.size(); ++i) s << weights(i) << ',';
  s << ";k=" << k << ";l=" << l << ";boxes=";
  for (const RegionBox& b : region.boxes) {
    for (const Interval& I : b.reals) s << I.lo << ':' << I.hi << ',';
    for (const UpperRect& R : b.uppers)
      s << R.re.lo << ':' << R.re.hi << ':' << R.im.lo << ':' << R.im.hi << ',';
    s << '|';
  }
  auto list = [&](const char* name, const std::vector<double>& v) {
    s << ';' << name << '=';
    for (double x : v) s << x << ',';
  };
  list("Q", Q_list);
  s << ";draws=" << draws << ";seed=" << seed << ";budget=" << budget << ";tol=" << tolerance;
  list("grid", grid);
  list("im_grid", im_grid);
  list("at", at);
  s << ";method=" << method << ";estimator=" << estimator << ";source=" << source;
  list("bins", bins);
  s << ";d=" << d << ";region=" << lattice_region << ";quick=" << quick;
  return s.str();
}

std::uint64_t JobConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

JobConfig parse_config(const std::vector<std::string>& args_in) {
  // Pull out --config and the subcommand.
  std::vector<std::string> cli;
  std::string config_path;
  for (std::size_t i = 0; i < args_in.size(); ++i) {
    const std::string& a = args_in[i];
    if (a == "--config") {
      if (i + 1 >= args_in.size()) throw UsageError("config", "missing file name");
      config_path = args_in[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      cli.push_back(a);
    }
  }
  std::string command;
  if (!cli.empty() && cli.front().rfind("-", 0) != 0) {
    command = cli.front();
    cli.erase(cli.begin());
    if (!kCommands.count(command)) throw UsageError("command", "unknown command '" + command + "'");
  }

  std::vector<std::string> tokens;
  if (!config_path.empty()) {
    std::set<std::string> given;
    for (const std::string& a : cli)
      if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
    for (const ConfigEntry& e : read_config_file(config_path)) {
      if (e.key == "command") {
        if (command.empty()) command = e.values.front();
        continue;
      }
      if (given.count(e.key)) continue;
      if (kFlagKeys.count(e.key)) {
        const std::string& v = e.values.front();
        if (v == "true" || v == "1") tokens.push_back("--" + e.key);
        else if (v != "false" && v != "0") throw UsageError(e.key, "expected true or false");
        continue;
      }
      tokens.push_back("--" + e.key);
      tokens.insert(tokens.end(), e.values.begin(), e.values.end());
    }
  }
  if (command.empty() && std::find_if(cli.begin(), cli.end(), [](const std::string& a) {
                           return a == "--help" || a == "-h";
                         }) != cli.end())
    throw HelpRequested{
        "conjdist <command> [options]\n"
        "commands: count, density, simulate, lattice, prob-real, verify\n"
        "conjdist <command> --help lists the options of a command.\n"};
  if (command.empty())
    throw UsageError("command", "expected one of count, density, simulate, lattice, prob-real, verify");
  if (!kCommands.count(command)) throw UsageError("command", "unknown command '" + command + "'");
  tokens.insert(tokens.end(), cli.begin(), cli.end());

  Raw raw;
  CLI::App app{"Counting and density of algebraic conjugates"};
  app.name("conjdist");
  CLI::App* sub = app.add_subcommand(command, "");
  add_common(sub, raw);
  switch (kCommands.at(command)) {
    case Command::Density:
      sub->add_option("--grid", raw.grid, "lo hi step")->expected(3);
      sub->add_option("--im-grid", raw.im_grid, "lo hi step for Im z")->expected(3);
      sub->add_option("--at", raw.at, "one point: k reals then (re, im) pairs")->expected(1, -1);
      sub->add_option("--method", raw.method, "auto | closed | general | projective | reduced");
      break;
    case Command::Simulate:
      sub->add_option("--estimator", raw.estimator, "density | count | moment | equivalence");
      sub->add_option("--source", raw.source, "G | ball");
      sub->add_option("--bins", raw.bins, "lo hi count")->expected(3);
      break;
    case Command::Lattice:
      sub->add_option("--d", raw.d, "dimension");
      sub->add_option("--region", raw.region, "cube | ball");
      break;
    case Command::Verify:
      sub->add_flag("--quick", raw.quick, "reduced sample sizes");
      break;
    default:
      break;
  }

  std::vector<std::string> reversed{command};
  reversed.insert(reversed.end(), tokens.begin(), tokens.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{sub->help()};
  } catch (const CLI::ParseError& e) {
    std::string field = "arguments";
    const std::string what = e.what();
    if (const auto pos = what.find("--"); pos != std::string::npos) {
      const auto end = what.find_first_of(" :,", pos);
      field = what.substr(pos + 2, end == std::string::npos ? std::string::npos : end - pos - 2);
    }
    throw UsageError(field, what);
  }
  return validate(kCommands.at(command), raw);
}

int run(const JobConfig& job, std::ostream& out_default, std::ostream& err) {
  std::ofstream file;
  if (!job.output.empty()) {
    file.open(job.output);
    if (!file) {
      err << "output: cannot open '" << job.output << "'\n";
      return 2;
    }
  }
  std::ostream& out = job.output.empty() ? out_default : file;
  if (job.threads) set_default_threads(job.threads);
  try {
    switch (job.command) {
      case Command::Count: return run_count(job, out);
      case Command::Density: return run_density(job, out);
      case Command::Simulate: return run_simulate(job, out);
      case Command::Lattice: return run_lattice(job, out);
      case Command::ProbReal: return run_prob_real(job, out);
      case Command::Verify: return run_verify(job, out);
    }
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    err << "resource: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "domain: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  JobConfig job;
  try {
    job = parse_config(args);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  return run(job, std::cout, std::cerr);
}

}  // namespace conjdist
