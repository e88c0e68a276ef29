#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sldp {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelfTestOptions {
  std::uint64_t seed = 20240917;
  int jobs = 1;
  /// Subset of check names to run; empty runs all of self_test_checks().
  std::vector<std::string> only;
};

/// Names of the built-in invariant checks, in execution order:
/// haar-bartlett, gamma-map, trace-identity, gaussian-rates,
/// entropy-closed-form, variational-bounds, monotonicity, growth-exponent.
const std::vector<std::string>& self_test_checks();

CheckResult run_check(const std::string& name, const SelfTestOptions& options = {});

/// Runs the selected checks, reporting each result as soon as it is known.
std::vector<CheckResult> run_self_test(const SelfTestOptions& options = {},
                                       const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace sldp
