#pragma once
// Run-time invariant suite behind the `verify` command.

#include <string>
#include <vector>

namespace sitnikov {

struct CheckResult {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool passed = false;
  std::string note;
};

inline constexpr double kDefaultVerifyTolerance = 1e-10;

/// SITNIKOV_TOL if set and parseable as a positive number, else 1e-10.
double verification_tolerance_from_env();

/// Evaluates every invariant; `tol` replaces the default 1e-10 in the checks
/// that use it (the others carry their own fixed tolerances).
std::vector<CheckResult> run_verification(double tol = kDefaultVerifyTolerance);

/// Value of T(-1)/2pi quoted in the literature.
inline constexpr double kQuotedPeriodRatio = 0.824429907123718;

/// lim dT/dh as h -> -2 from above, 9 sqrt2 pi / 32.
double boundary_slope_exact();
/// The quoted (incorrect) limit pi (1 + 4 sqrt2) / 16.
double boundary_slope_quoted();
/// Richardson-extrapolated forward difference of T at h = -2 with base step delta.
double boundary_slope_estimate(double delta = 1e-3);

}  // namespace sitnikov
