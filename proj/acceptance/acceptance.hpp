#pragma once

// The acceptance criteria, one function each, shared by the acceptance test
// binary and `polite selftest`.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace polite::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> checks;  ///< one "ok|FAIL name: detail" line per sub-check
  double seconds = 0.0;
  double time_limit = 0.0;  ///< 0 means none

  /// Without the wall-clock time, so reports are reproducible.
  nlohmann::json to_json() const;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;
  std::function<CriterionResult(std::uint64_t seed)> run;
};

const std::vector<Criterion>& criteria();

/// Runs one criterion, timing it and enforcing its time limit.
CriterionResult run_criterion(const Criterion& c, std::uint64_t seed);

/// Runs all criteria, printing one line per criterion (and sub-check lines
/// when verbose) to `out`.
std::vector<CriterionResult> run_all(std::uint64_t seed, std::ostream& out, bool verbose = true);

std::string summary_line(const CriterionResult& r);

}  // namespace polite::acceptance
