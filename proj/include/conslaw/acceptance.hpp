#pragma once

#include <string>
#include <vector>

namespace conslaw {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// One line per sub-check: "ok|FAIL <what>: <measured> vs <limit>".
  std::vector<std::string> details;
  double seconds = 0.0;
  double time_limit = 0.0;
};

/// Runs one criterion (1..9). Module errors inside a criterion become a
/// failed sub-check rather than an exception.
CriterionResult run_criterion(int id);

/// Runs the listed criteria (all nine when empty).
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

std::string format_result(const CriterionResult& r, bool verbose);

}  // namespace conslaw
