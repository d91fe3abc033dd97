// Acceptance suite: one PASS/FAIL line per criterion, followed by indented
// diagnostics. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sitnikov/dynamics.hpp"
#include "sitnikov/integrator.hpp"
#include "sitnikov/resonance.hpp"
#include "sitnikov/solution.hpp"
#include "sitnikov/verification.hpp"

using namespace sitnikov;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

int failures = 0;
std::vector<std::string> pending;

// Diagnostics are held until the verdict line is printed.
template <class... Args>
void note(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  pending.emplace_back(buf);
}

void flush() {
  for (const auto& line : pending) std::printf("     %s\n", line.c_str());
  pending.clear();
}

void report(int id, const std::string& title, bool passed) {
  std::printf("%s %2d %s\n", passed ? "PASS" : "FAIL", id, title.c_str());
  flush();
  if (!passed) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs(const Vector4<double>& v) { return v.cwiseAbs().maxCoeff(); }

void period_value() {
  const double value = period_T(-1.0) / (2 * kPi);
  const double residual = std::abs(value - 0.824429907123718);
  std::vector<double> times;
  for (int i = 0; i < 101; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    volatile double sink = period_T(-1.0 - 1e-17 * i);
    (void)sink;
    times.push_back(seconds_since(t0));
  }
  std::nth_element(times.begin(), times.begin() + 50, times.end());
  const double median = times[50];
  report(1, "T(-1)/2pi = 0.824429907123718 within 1e-12, runtime < 1 ms", residual < 1e-12 && median < 1e-3);
  note("T(-1)/2pi = %.17g, residual %.3g, median runtime %.3g s", value, residual, median);
}

void period_limits() {
  bool limit_ok = true;
  for (double d : {1e-4, 1e-6, 1e-8}) {
    const double gap = std::abs(period_T(-2 + d) - kPi / kSqrt2);
    const bool ok = gap < 10 * std::sqrt(d);
    limit_ok = limit_ok && ok;
    note("delta = %g: |T - pi/sqrt2| = %.3g (bound %.3g) %s", d, gap, 10 * std::sqrt(d), ok ? "ok" : "fails");
  }
  const double slope = boundary_slope_estimate();
  const double quoted = boundary_slope_quoted();
  const bool slope_ok = std::abs(slope - quoted) < 1e-3;
  report(2, "T(-2+d) -> pi/sqrt2 and dT/dh(-2+) = pi(1+4 sqrt2)/16 within 1e-3", limit_ok && slope_ok);
  note("limit clause %s", limit_ok ? "passes" : "fails");
  note("slope clause %s: Richardson estimate %.9f, stated %.9f, gap %.3g", slope_ok ? "passes" : "fails", slope,
       quoted, std::abs(slope - quoted));
  note("estimate vs 9 sqrt2 pi/32 = %.9f: gap %.3g", boundary_slope_exact(),
       std::abs(slope - boundary_slope_exact()));
}

void monotonicity() {
  long violations = 0;
  double previous = period_T(-1.999);
  for (int i = 1; i < 1000; ++i) {
    const double h = -1.999 + 1.989 * i / 999;
    const double t = period_T(h);
    violations += !(t > previous);
    previous = t;
  }
  report(3, "T strictly increasing on a 1000-point grid over (-1.999, -0.01)", violations == 0);
  note("violations: %ld", violations);
}

void action_oracle() {
  double worst = 0, worst_derivative = 0;
  for (int i = 0; i < 50; ++i) {
    const double h = -1.995 + 1.985 * i / 49;
    const double d = 1e-6 * std::abs(h);  // T grows like |h|^(-3/2) near 0
    worst = std::max(worst, std::abs(action_J(h) - double(oracle::action(h))));
    const double fd = (action_J(h + d) - action_J(h - d)) / (2 * d);
    worst_derivative = std::max(worst_derivative, std::abs(fd - period_T(h) / (2 * kPi)));
  }
  report(4, "J(h) vs quadrature within 1e-10 on 50 points; |dJ/dh - T/2pi| < 1e-6",
         worst < 1e-10 && worst_derivative < 1e-6);
  note("max |J - quadrature| = %.3g, max |dJ/dh - T/2pi| = %.3g", worst, worst_derivative);
}

void time_map_oracle() {
  double worst = 0, worst_period = 0;
  for (int ik = 0; ik < 10; ++ik) {
    const double k = 0.05 + 0.065 * ik;  // up to 0.635
    const double period_nu = nu_period(k);
    for (int in = 0; in < 20; ++in) {
      const double nu = period_nu * (in + 0.5) / 20;
      worst = std::max(worst, std::abs(time_of_nu(nu, k) - double(oracle::time_of_nu(nu, k))));
    }
    worst_period = std::max(worst_period, std::abs(time_of_nu(period_nu, k) - period_T(energy_from_modulus(k))));
  }
  report(5, "t(nu) vs quadrature within 1e-10 on a 20 x 10 grid; t(4K) = T(h(k))",
         worst < 1e-10 && worst_period < 1e-10);
  note("max |t - quadrature| = %.3g, max |t(4K) - T| = %.3g", worst, worst_period);
}

void orbit_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const EnergyPair<double> ep{-1, -1};
  const State<double> s0 = analytic_state(0.0, ep);
  const double T = period_T(-1.0);
  IntegrationConfig cfg;
  cfg.t_max = T;
  const double closure = max_abs(integrate_restricted(s0, 1.0, cfg).final_state().vector() -
                                 analytic_state(T, ep).vector());
  cfg.t_max = 100 * T;
  cfg.sample_interval = T / 10;
  const Trajectory long_run = integrate_restricted(s0, 1.0, cfg);
  double drift = 0;
  for (const auto& s : long_run.samples) {
    drift = std::max(drift, std::abs(hamiltonian_restricted(s.state, 1.0) - ep.total()));
  }
  const double elapsed = seconds_since(t0);
  report(6, "one period matches analytic_state within 1e-8; 100-period drift < 1e-9; < 10 s",
         closure < 1e-8 && drift < 1e-9 && elapsed < 10);
  note("closure %.3g, drift %.3g, runtime %.3g s (dt = %g, %s)", closure, drift, elapsed, cfg.dt,
       to_string(cfg.method).c_str());
}

void symplecticity() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  for (double alpha : {0.5, 0.6, 0.9}) {
    const auto m = MassParams<double>::from_ratio(1 / alpha - 1);
    for (int i = 0; i < 100; ++i) {
      RegState<double> r{u(rng), u(rng), u(rng), u(rng)};
      if (std::abs(r.Q3) < 1e-3) r.Q3 = 1e-3;
      worst = std::max(worst, symplectic_defect(r, m));
    }
  }
  report(7, "symplectic defect < 1e-9 at 100 points for alpha in {1/2, 0.6, 0.9}", worst < 1e-9);
  note("max defect %.3g", worst);
}

void regularized_regularity() {
  const double mu = 1e-10;
  const auto m = MassParams<double>::from_ratio(1.0, mu);
  const State<double> s0{0.3, -0.2, 0.0, 0.1};  // mass momenta, q3 > q4
  const double h = hamiltonian_reduced(s0, m);
  IntegrationConfig cfg;
  cfg.t_max = 50;
  cfg.sample_interval = 0.5;
  const RegTrajectory reg = integrate_regularized(rho_inverse(s0, m), mu, h, m, cfg);

  bool finite = true;
  for (const auto& s : reg.samples) finite = finite && regularized_vector_field(s.state, h, m).allFinite();
  for (const auto& e : reg.events) finite = finite && regularized_vector_field(e.state, h, m).allFinite();
  const double level = reg.max_abs_L();

  // compare rho(r) with the restricted swap flow, in velocities, away from the crossings
  const State<double> v0 = to_velocities(s0, m);
  IntegrationConfig rcfg;
  rcfg.collision_policy = CollisionPolicy::swap;
  double worst = 0;
  long compared = 0;
  for (const auto& s : reg.samples) {
    if (s.t <= 0) continue;
    bool near_collision = false;
    for (const auto& e : reg.events) near_collision = near_collision || std::abs(s.t - e.t) < 1e-2;
    if (near_collision || std::abs(s.state.Q3) < 1e-3) continue;
    rcfg.t_max = s.t;
    const State<double> direct = from_velocities(integrate_restricted(v0, 1.0, rcfg).final_state(), m);
    worst = std::max(worst, max_abs(rho(s.state, m).vector() - direct.vector()));
    ++compared;
  }
  const bool crossed = !reg.events.empty();
  report(8, "regularized orbit crosses Q3 = 0 with |L| < 1e-8, finite field, rho image = swap orbit within 1e-7",
         crossed && finite && level < 1e-8 && worst < 1e-7);
  note("mu = %g, crossings %zu, max |L| = %.3g, finite derivatives %s", mu, reg.events.size(), level,
       finite ? "yes" : "no");
  note("physical time span %.4g, %ld comparison points, max |rho(r) - swap orbit| = %.3g",
       reg.samples.back().t, compared, worst);
}

void resonance_closure() {
  bool ok = true;
  for (const ResonanceTriple t : {ResonanceTriple{1, 1, 1}, ResonanceTriple{2, 1, 1}, ResonanceTriple{3, 2, 1}}) {
    const ResonantSurface s = resonant_surface(t);
    const double identity = std::max(std::abs(double(t.q) * period_T(s.h3) - s.tau),
                                     std::abs(double(t.n) * period_T(s.h4) - s.tau));
    const EnergyPair<double> ep{s.h3, s.h4};
    const State<double> s0 = analytic_state(0.0, ep, PhaseOffsets<double>{0.2, 1.1});
    IntegrationConfig cfg;
    cfg.t_max = s.tau;
    cfg.detect_collisions = false;  // bodies pass through each other; swap would relabel energies
    const double closure = max_abs(integrate_restricted(s0, 1.0, cfg).final_state().vector() - s0.vector());
    ok = ok && identity < 1e-9 && closure < 1e-7;
    note("(%ld,%ld,%ld): h3 = %.12f, h4 = %.12f, identity %.3g, closure %.3g", t.p, t.q, t.n, s.h3, s.h4,
         identity, closure);
  }
  report(9, "q T(h3) = n T(h4) = 2 pi p within 1e-9 and closure after tau within 1e-7", ok);
}

void counting_bound_check() {
  const long brute = oracle::brute_force_triple_count(1);
  const bool p1 = long(enumerate_triples(1).size()) == 4 && brute == 4;
  long first_violation = 0, violations = 0;
  bool unordered_ok = true;
  for (long p = 1; p <= 50; ++p) {
    const long count = long(enumerate_triples(p).size());
    if (count > counting_bound(p)) {
      ++violations;
      if (first_violation == 0) first_violation = p;
    }
    unordered_ok = unordered_ok && oracle::brute_force_unordered_count(p) <= counting_bound(p);
  }
  report(10, "|enumerate_triples(p)| <= 8p phi(p) + sum phi(q) for p <= 50; p = 1 count is 4",
         p1 && violations == 0);
  note("p = 1: enumerated %zu, brute force %ld, bound %ld", enumerate_triples(1).size(), brute, counting_bound(1));
  note("bound exceeded for %ld of 50 values of p; first at p = %ld (count %zu > bound %ld)", violations,
       first_violation, first_violation ? enumerate_triples(first_violation).size() : 0,
       first_violation ? counting_bound(first_violation) : 0);
  note("unordered pairs q <= n stay within the bound for all p <= 50: %s", unordered_ok ? "yes" : "no");
}

void density_proxy() {
  double previous = std::numeric_limits<double>::infinity();
  bool ok = true;
  std::string gaps;
  for (long p_max : {4L, 8L, 16L, 32L}) {
    const double gap = max_gap(atlas(p_max));
    ok = ok && gap <= previous;
    previous = gap;
    char buf[64];
    std::snprintf(buf, sizeof buf, " %ld:%.4g", p_max, gap);
    gaps += buf;
  }
  report(11, "max gap of h_star in (-3.9, -0.1) non-increasing for p_max in {4, 8, 16, 32}", ok);
  note("max gaps:%s (density witness only; measure zero not checked)", gaps.c_str());
}

void bounce_algebra() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2, 2);
  double involution = 0, momentum = 0, kinetic = 0;
  for (double c : {1.0, 0.5, 0.25}) {
    const auto m = MassParams<double>::from_ratio(c);
    for (int i = 0; i < 50; ++i) {
      const double q = u(rng);
      const State<double> s{q, q, u(rng), u(rng)};
      const State<double> b = bounce_map(s, m);
      involution = std::max(involution, max_abs(bounce_map(b, m).vector() - s.vector()));
      if (m.equal_masses()) momentum = std::max(momentum, std::abs(b.p3 + b.p4 - s.p3 - s.p4));
      const double k0 = 0.5 * (s.p3 * s.p3 / m.alpha + s.p4 * s.p4 / m.beta);
      const double k1 = 0.5 * (b.p3 * b.p3 / m.alpha + b.p4 * b.p4 / m.beta);
      kinetic = std::max(kinetic, std::abs(k1 - k0));
    }
  }

  // unequal masses: reflection only on the plane, otherwise the run stops
  const double c = 0.5;
  IntegrationConfig cfg;
  cfg.collision_policy = CollisionPolicy::reflect_if_admissible;
  cfg.t_max = 0.6;
  const State<double> meet{0, 0, -0.6, 1.2};  // alpha v3 + beta v4 = 0
  IntegrationConfig back = cfg;
  back.t_max = 0.3;
  const State<double> end = integrate_restricted(meet, c, back).final_state();
  const Trajectory admissible = integrate_restricted(State<double>{end.q3, end.q4, -end.p3, -end.p4}, c, cfg);
  const bool reflected = !admissible.terminated &&
                         std::any_of(admissible.events.begin(), admissible.events.end(),
                                     [](const Event& e) { return e.kind == EventKind::bounce_applied; });
  const Trajectory inadmissible = integrate_restricted(State<double>{0.2, -0.2, -1.0, 1.0}, c, cfg);
  const bool stopped = inadmissible.terminated && inadmissible.events.back().kind == EventKind::stopped &&
                       std::none_of(inadmissible.events.begin(), inadmissible.events.end(),
                                    [](const Event& e) { return e.kind == EventKind::bounce_applied; });
  IntegrationConfig stop_cfg = cfg;
  stop_cfg.collision_policy = CollisionPolicy::stop;
  const bool policy_stop = integrate_restricted(State<double>{0.2, -0.2, -1.0, 1.0}, c, stop_cfg).terminated;

  report(12, "bounce is an involution, conserves p3 + p4 (swap) and kinetic energy to 1e-12; reflection gated",
         involution < 1e-12 && momentum < 1e-12 && kinetic < 1e-12 && reflected && stopped && policy_stop);
  note("involution %.3g, momentum %.3g, kinetic %.3g", involution, momentum, kinetic);
  note("plane collision reflected: %s; off-plane collision stopped: %s; policy stop terminates: %s",
       reflected ? "yes" : "no", stopped ? "yes" : "no", policy_stop ? "yes" : "no");
}

void topology() {
  const std::vector<std::pair<double, std::string>> probes{{-3, "S³-foliated-by-tori"},
                                                          {-2, "S³-minus-4-points"},
                                                          {-1, "S³-with-4-disc-boundaries"},
                                                          {0, "two-cylinders-plus-four-planes"},
                                                          {1, "cylinders-and-planes"}};
  bool ok = true;
  std::string seen;
  for (const auto& [h, expected] : probes) {
    const std::string got = label(classify_surface(h));
    ok = ok && got == expected;
    seen += " " + got;
  }
  bool rejects = false;
  try {
    classify_surface(-4);
  } catch (const NonexistentLevelError&) {
    rejects = true;
  }
  report(13, "surface labels at h in {-3, -2, -1, 0, 1}", ok && rejects);
  note("labels:%s; h = -4 rejected: %s", seen.c_str(), rejects ? "yes" : "no");
}

}  // namespace

int main() {
  for (auto* criterion : {&period_value, &period_limits, &monotonicity, &action_oracle, &time_map_oracle,
                          &orbit_equivalence, &symplecticity, &regularized_regularity, &resonance_closure,
                          &counting_bound_check, &density_proxy, &bounce_algebra, &topology}) {
    criterion();
    flush();
  }
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
