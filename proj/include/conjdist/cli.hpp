#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "conjdist/heights.hpp"
#include "conjdist/region.hpp"

namespace conjdist {

enum class Command { Count, Density, Simulate, Lattice, ProbReal, Verify };

/// A fully validated job. Fields not used by the command keep defaults.
struct JobConfig {
  Command command = Command::Verify;

  int n = 1;
  PNorm p = PNorm::infinity();
  std::string weights_spec = "ones";
  Eigen::VectorXd weights;
  int k = 1;
  int l = 0;
  Region region;
  std::vector<double> Q_list;

  std::uint64_t draws = 100'000;
  std::uint64_t seed = 1;
  std::size_t budget = 0;
  double tolerance = 1e-8;
  unsigned threads = 0;
  std::string output;  ///< empty: standard output
  bool timing = false;

  // density
  std::vector<double> grid;     ///< lo hi step (x, or Re z)
  std::vector<double> im_grid;  ///< lo hi step (Im z)
  std::vector<double> at;       ///< one query: k reals then (re, im) pairs
  std::string method = "auto";  ///< auto | closed | general | projective | reduced

  // simulate
  std::string estimator = "density";  ///< density | count | moment | equivalence
  std::string source = "G";           ///< G | ball
  std::vector<double> bins{-3.0, 3.0, 20.0};

  // lattice
  int d = 2;
  std::string lattice_region = "cube";  ///< cube | ball

  // verify
  bool quick = false;

  WeightedHeight height() const { return WeightedHeight(n, weights, p); }

  /// Every field that influences results, in a fixed textual form.
  std::string canonical() const;
  /// FNV-1a of canonical().
  std::uint64_t hash() const;
};

/// Thrown by parse_config for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

/// Parses command-line tokens (without the program name). A `--config FILE`
/// token pulls in a flat `key = value` file whose keys mirror the flags;
/// flags given on the command line take precedence over the file.
/// Throws UsageError naming the offending field.
JobConfig parse_config(const std::vector<std::string>& args);

/// Runs the job. Exit code 0 on success, 1 when a numeric result is flagged
/// (unconverged integral, root-finder failure, failed criterion).
int run(const JobConfig& job, std::ostream& out, std::ostream& err);

/// parse_config + run with usage errors mapped to exit code 2.
int main_entry(int argc, char** argv);

}  // namespace conjdist
