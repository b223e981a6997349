// Oracle and invariant checks behind `intricacy verify`.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "intricacy/harness/config.hpp"

namespace intricacy::harness {

struct CheckResult {
  /// Acceptance criterion number, or 0 for a supplementary invariant.
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

CheckResult check_algebra();
CheckResult check_intertwining(const ExperimentConfig& cfg);
CheckResult check_dense_oracle(const ExperimentConfig& cfg);
CheckResult check_measure_identity(const ExperimentConfig& cfg);
CheckResult check_tail_exponent();
CheckResult check_front_profile(const ExperimentConfig& cfg);
CheckResult check_constrained_front(const ExperimentConfig& cfg);
CheckResult check_pulled_front(const ExperimentConfig& cfg);
CheckResult check_multichannel_limit(const ExperimentConfig& cfg);
CheckResult check_census(const ExperimentConfig& cfg);
CheckResult check_logistic(const ExperimentConfig& cfg);
CheckResult check_profile_invariants(const ExperimentConfig& cfg);

/// All checks in table order.
std::vector<CheckResult> run_verify(const ExperimentConfig& cfg);

/// Runs `body` with timing; any exception becomes a failed result.
CheckResult timed_check(int criterion, std::string name, const std::function<CheckResult()>& body);

void print_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace intricacy::harness
