#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ovals/asymptotics.hpp"

namespace ovals {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;    // measured values, one line
  nlohmann::json values;  // measured values and fitted constants
};

// Criteria 1-8 and 12 use their own fixed setups (n = 2); the run-based criteria use `spec` and `run`.
struct AcceptanceConfig {
  AnsatzSpec spec;
  RunOptions run;
  double region_span = 10.0;  // criterion 14 window [tau0, tau0 + span]
  double ratio_hi = -30.0;    // criterion 11 window end for dbar and H_max ratios
  bool node_doubling = true;  // criterion 11 constant stability
};

constexpr int kCriteria = 14;

// Evaluates the criteria in `ids` (all when empty) in order; `report` runs after each one.
// An exception inside a criterion makes it FAIL with the message as summary.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg, const std::vector<int>& ids = {},
                                            const std::function<void(const CriterionResult&)>& report = {});

std::string format_line(const CriterionResult& r);

}  // namespace ovals
