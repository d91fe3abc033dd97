#include "sitnikov/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "sitnikov/dynamics.hpp"
#include "sitnikov/integrator.hpp"
#include "sitnikov/quadrature.hpp"
#include "sitnikov/resonance.hpp"
#include "sitnikov/solution.hpp"

namespace sitnikov {

double verification_tolerance_from_env() {
  const char* raw = std::getenv("SITNIKOV_TOL");
  if (raw == nullptr) return kDefaultVerifyTolerance;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0) || !std::isfinite(v)) return kDefaultVerifyTolerance;
  return v;
}

double boundary_slope_exact() { return 9 * std::numbers::sqrt2 * std::numbers::pi / 32; }

double boundary_slope_quoted() { return std::numbers::pi * (1 + 4 * std::numbers::sqrt2) / 16; }

double boundary_slope_estimate(double delta) {
  auto forward = [](double d) { return (period_T(-2 + 2 * d) - period_T(-2 + d)) / d; };
  return 2 * forward(delta / 2) - forward(delta);
}

std::vector<CheckResult> run_verification(double tol) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double residual, double tolerance, std::string note = {}) {
    out.push_back({std::move(name), residual, tolerance, residual <= tolerance, std::move(note)});
  };
  const double two_pi = 2 * std::numbers::pi;

  add("period_quoted_value", std::abs(period_T(-1.0) / two_pi - kQuotedPeriodRatio), tol,
      "T(-1)/2pi against 0.824429907123718");
  add("period_lower_limit", std::abs(period_T(-2 + 1e-10) - std::numbers::pi / std::numbers::sqrt2), 1e-5);
  add("period_quadrature", std::abs(period_T(-1.5) - quadrature::period_by_quadrature(-1.5)) / period_T(-1.5), tol);

  long violations = 0;
  double previous = period_T(-1.999);
  for (int i = 1; i < 1000; ++i) {
    const double h = -1.999 + (1.989 * i) / 999;
    const double t = period_T(h);
    if (!(t > previous)) ++violations;
    previous = t;
  }
  add("period_monotone", double(violations), 0, "violations on a 1000-point grid over (-1.999, -0.01)");

  double action_err = 0;
  for (int i = 1; i <= 10; ++i) {
    const double h = -2 + 0.19 * i - 0.05;
    action_err = std::max(action_err, std::abs(action_J(h) - quadrature::action_by_quadrature(h)));
  }
  add("action_quadrature", action_err, tol);

  const double dh = 1e-5;
  const double djdh = (action_J(-1.2 + dh) - action_J(-1.2 - dh)) / (2 * dh);
  add("action_derivative", std::abs(djdh - period_T(-1.2) / two_pi), 1e-6, "dJ/dh = T/2pi at h = -1.2");

  add("time_map_period", std::abs(time_of_nu(4 * elliptic::complete_K(0.5), 0.5) - period_T(-1.0)), tol);
  add("reduced_form_consistency", rationality_form_discrepancy(-0.8), tol);

  const double slope = boundary_slope_estimate();
  add("boundary_slope", std::abs(slope - boundary_slope_exact()), 1e-3,
      "against 9 sqrt2 pi/32; quoted pi(1+4 sqrt2)/16 is off by " +
          std::to_string(std::abs(slope - boundary_slope_quoted())));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  double defect = 0;
  for (double c : {1.0, 2.0 / 3.0, 1.0 / 9.0}) {  // alpha = 1/2, 0.6, 0.9
    const auto m = MassParams<double>::from_ratio(c);
    for (int i = 0; i < 20; ++i) {
      RegState<double> r{u(rng), u(rng), u(rng), u(rng)};
      if (std::abs(r.Q3) < 1e-3) r.Q3 = 0.5;
      defect = std::max(defect, symplectic_defect(r, m));
    }
  }
  add("symplectic_defect", defect, 1e-9);

  double bounce = 0;
  for (double c : {1.0, 0.5}) {
    const auto m = MassParams<double>::from_ratio(c);
    const State<double> s{0.3, 0.3, 0.7, c == 1.0 ? -0.2 : -0.7};
    const State<double> twice = bounce_map(bounce_map(s, m), m);
    const double ke = s.p3 * s.p3 / (2 * m.alpha) + s.p4 * s.p4 / (2 * m.beta);
    const State<double> b = bounce_map(s, m);
    const double ke_b = b.p3 * b.p3 / (2 * m.alpha) + b.p4 * b.p4 / (2 * m.beta);
    bounce = std::max({bounce, (twice.vector() - s.vector()).norm(), std::abs(ke - ke_b)});
  }
  add("bounce_algebra", bounce, 1e-12);

  const ResonantSurface surface = resonant_surface({3, 2, 1});
  add("resonance_identity",
      std::max(std::abs(2 * period_T(surface.h3) - surface.tau), std::abs(period_T(surface.h4) - surface.tau)), 1e-9,
      "q T(h3) = n T(h4) = 2 pi p for (3,2,1)");

  long label_errors = 0;
  label_errors += classify_surface(-3) != SurfaceTopology::sphere_foliated_by_tori;
  label_errors += classify_surface(-2) != SurfaceTopology::sphere_minus_four_points;
  label_errors += classify_surface(-1) != SurfaceTopology::sphere_with_four_disc_boundaries;
  label_errors += classify_surface(0) != SurfaceTopology::two_cylinders_four_planes;
  label_errors += classify_surface(1) != SurfaceTopology::cylinders_and_planes;
  add("topology_labels", double(label_errors), 0);

  const EnergyPair<double> ep{-1, -1};
  const State<double> s0 = analytic_state(0.0, ep);
  IntegrationConfig cfg;
  cfg.t_max = period_T(-1.0);
  const State<double> s1 = integrate_restricted(s0, 1.0, cfg).final_state();
  add("orbit_closure", (s1.vector() - s0.vector()).cwiseAbs().maxCoeff(), 1e-8, "one period at h3 = h4 = -1");
  return out;
}

}  // namespace sitnikov
