#pragma once

#include <string>
#include <vector>

namespace balance::acceptance {

struct Check {
  std::string description;
  bool passed;
};

struct CriterionResult {
  int id;
  std::string title;
  std::vector<Check> checks;

  bool passed() const;
};

struct Options {
  /// Smaller game lengths and search depths; thresholds are unchanged.
  bool fast = false;
};

inline constexpr int kCriterionCount = 11;

/// Runs acceptance criterion `id` (1..11).
CriterionResult run_criterion(int id, const Options& options);
std::vector<CriterionResult> run_all(const Options& options);

/// One line per criterion followed by its failed checks (all checks when
/// verbose).
std::string format_report(const std::vector<CriterionResult>& results, bool verbose);

}  // namespace balance::acceptance
