#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace conjdist {

struct CriterionResult {
  std::string id;  ///< "A1".."A9"
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Quick runs shrink sample sizes and table lengths; the pass conditions are
/// the same.
enum class AcceptanceLevel { Quick, Full };

struct AcceptanceOptions {
  AcceptanceLevel level = AcceptanceLevel::Full;
  std::uint64_t seed = 20240601;
  unsigned threads = 0;
};

inline constexpr int kCriterionCount = 9;

/// Runs criterion `index` (1..9). Exceptions are caught and reported as a
/// failure.
CriterionResult run_criterion(int index, const AcceptanceOptions& options);

/// All criteria in order; `report` is called after each one.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& report = {});

/// "A3 PASS  (12.3 s) detail"
std::string format_line(const CriterionResult& r);

}  // namespace conjdist
