#pragma once

#include <string>
#include <vector>

namespace heis {

struct CheckResult {
  bool pass = false;
  std::string detail;  // measured values, one line
  double seconds = 0;
};

// One verification criterion. Runs are deterministic: seeds are fixed
// inside each check and every parallel path is thread-count independent,
// so a criterion either holds on a machine or it does not.
struct Check {
  const char* name;
  const char* suite;  // core | closure | beta | symmetry | sio
  int criterion;      // 1-based position in the published list
  double budget;      // wall-clock bound in seconds, part of the criterion
  CheckResult (*run)(unsigned threads);
};

// All checks in criterion order.
const std::vector<Check>& all_checks();

// Subset with the given suite name; "all" returns everything. Throws
// std::invalid_argument on an unknown suite.
std::vector<Check> checks_for_suite(const std::string& suite);

}  // namespace heis
