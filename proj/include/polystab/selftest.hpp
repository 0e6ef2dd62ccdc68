// Self-test harness: reproduces the library's reference examples and runs
// the property suites end to end. Each criterion yields one pass/fail line;
// a known documented deviation is flagged instead of being hidden.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace polystab::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// True for the one check whose advertised claim is mathematically
  /// unattainable; the detail string explains why. See README, "Documented
  /// deviation".
  bool expected_failure = false;
  std::string detail;
};

/// Runs the twelve acceptance checks in order. When `log` is non-null it
/// receives one line per criterion as soon as that criterion finishes.
std::vector<CriterionResult> run_all(std::uint64_t seed = 7,
                                     std::ostream* log = nullptr);

/// Renders the summary table. Returns true when every criterion either
/// passed or is an expected (documented) failure.
bool report(std::ostream& os, const std::vector<CriterionResult>& results);

/// One rendered line for a single criterion (used for incremental logging).
std::string render_line(const CriterionResult& r);

}  // namespace polystab::selftest
