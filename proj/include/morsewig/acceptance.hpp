#pragma once

#include <string>
#include <vector>

namespace morsewig {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

struct AcceptanceOptions {
  /// Bessel tolerance used by every closed-form and special-function check.
  double bessel_rel_tol = 1e-10;
};

/// Runs the twelve acceptance criteria in order. A criterion that throws is
/// reported as a failure carrying the error message. The report contains no
/// timings, so repeated runs print identical text.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "PASS  3 normalization: ..." style single line.
std::string format_result(const CriterionResult& r);

}  // namespace morsewig
