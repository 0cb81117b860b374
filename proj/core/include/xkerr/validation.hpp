// Self-check suite behind `xkerr validate`: brute-force oracle grid, moment
// path agreement, channel equivalence, separable bound sampling, witness sign
// convention, lossless saturation and the theta = 0 rows of every preset.
#pragma once

#include <string>
#include <vector>

namespace xkerr {

struct ValidationOptions {
  /// Flips the number-term sign in U so the convention check must fail.
  bool inject_sign_flip = false;
  /// Oracle Fock cutoff per mode.
  int oracle_cutoff = 30;
  int separable_samples = 10000;
  unsigned long long seed = 42;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured error / statistic
  double tolerance = 0.0;  // threshold it is compared against
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* first_failure() const;
  std::string to_json() const;
};

/// Fixed oracle grid: alpha in {0.5, 1.2}, beta in {0.8, 1.5},
/// theta in {0.1, 0.7, 1.3}, loss in {0, 0.3}.
struct OraclePoint {
  double alpha, beta, theta, loss;
};
std::vector<OraclePoint> oracle_grid();

ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace xkerr
