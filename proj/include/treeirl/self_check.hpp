#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace treeirl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Closed-form two-action soft value (plain and density-aware) against
/// the numeric mixture maximization, |diff| < 1e-6 on random instances.
CheckResult check_eqb_closed_form(int instances, std::uint64_t seed);

/// Closed-form mixture weight against the numeric argmax, |diff| < 1e-4.
CheckResult check_optimal_weight(int instances, std::uint64_t seed);

/// Analytic policy gradient against central finite differences
/// (epsilon = 1e-5), relative error < 1e-4 on random tabular instances.
CheckResult check_policy_gradient(int instances, std::uint64_t seed);

/// Hand-checked soft-Bellman backup on the two-level binary tree with
/// rewards (1, 0): V*(root) = ln(e+1), pi*(left) = e/(e+1), within 1e-9.
CheckResult check_oracle_sanity();

/// The four checks above with default sizes (1000/1000/100 instances).
std::vector<CheckResult> run_core_checks(std::uint64_t seed = 20240829);

/// Prints one line per result; returns true iff all passed.
bool report_checks(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace treeirl
