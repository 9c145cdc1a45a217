#pragma once

#include <string>
#include <vector>

namespace ltk {

struct CheckResult {
  std::string id;      // "1a", "5c", ...
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

struct AcceptanceOptions {
  /// Reduced Monte Carlo sizes for a fast smoke run. The acceptance gate is
  /// the default (full) configuration.
  bool quick = false;
};

/// Runs the full cross-method validation suite (nine criteria, each a group
/// of individually reported checks) at pinned sizes and tolerances.
ValidationReport run_acceptance(const AcceptanceOptions& opts = {});

/// High-precision reference for the I-Bessel difference form of psi_p,
///   e^x sqrt(pi x/2) [I_{-p}(x) - I_p(x)] / sin(pi p),
/// evaluated in double-double arithmetic (the difference cancels by e^{2x},
/// far beyond plain doubles). Supported p: 0.1, 0.25, 0.4.
double psi_p_iform_oracle(double p, double x);

}  // namespace ltk
