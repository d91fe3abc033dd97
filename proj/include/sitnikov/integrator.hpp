#pragma once
// Time integration of the restricted, reduced and regularized systems with
// collision detection and bounce handling.

#include <string>
#include <vector>

#include "sitnikov/dynamics.hpp"

namespace sitnikov {

enum class Method {
  stormer_verlet,    ///< kick-drift-kick leapfrog, order 2, fixed step
  yoshida6,          ///< 7-stage composition of leapfrog steps, order 6, fixed step
  dormand_prince45,  ///< embedded Runge-Kutta 5(4), adaptive
};

enum class CollisionPolicy {
  swap,                   ///< exchange (p3, p4) -> (p4, p3)
  reflect_if_admissible,  ///< p -> A^T p when alpha = 1/2 or p3 + p4 = 0, else stop
  stop,                   ///< terminate at the first collision
};

enum class EventKind { collision, bounce_applied, plane_crossing, stopped };

struct IntegrationConfig {
  double dt = 1e-3;         ///< fixed step, or initial step for adaptive methods
  double t_max = 1;         ///< end of the run (physical time, or tau for the regularized flow)
  Method method = Method::yoshida6;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  CollisionPolicy collision_policy = CollisionPolicy::swap;
  double sample_interval = 0;                     ///< 0 records every step end
  double collision_tolerance = kCollisionTolerance;  ///< polish target for |q3 - q4|
  double plane_tolerance = 1e-8;                  ///< |p3 + p4| threshold for plane crossings and reflection
  double stop_distance = 1e-6;                    ///< reduced run (mu > 0) terminates at q3 - q4 = this
  bool detect_collisions = true;
  long max_steps = 50'000'000;

  /// Throws DomainError on non-positive dt, t_max or tolerances.
  void validate() const;
};

struct Sample {
  double t = 0;
  State<double> state;
};

struct Event {
  double t = 0;
  EventKind kind = EventKind::collision;
  State<double> state;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Event> events;
  bool terminated = false;  ///< run ended before t_max (policy stop or inadmissible bounce)
  std::string termination_reason;

  const State<double>& final_state() const { return samples.back().state; }
  double final_time() const { return samples.back().t; }
};

struct RegSample {
  double tau = 0;
  double t = 0;
  RegState<double> state;
  double L = 0;
};

struct RegEvent {
  double tau = 0;
  double t = 0;
  EventKind kind = EventKind::collision;
  RegState<double> state;
};

struct RegTrajectory {
  std::vector<RegSample> samples;
  std::vector<RegEvent> events;
  double mu = 0;
  double h = 0;

  double max_abs_L() const;
};

std::string to_string(Method m);
std::string to_string(CollisionPolicy p);
std::string to_string(EventKind k);
Method parse_method(const std::string& s);
CollisionPolicy parse_policy(const std::string& s);

/// Two uncoupled oscillators, each obeying q'' = -q/(q^2 + 1/4)^{3/2}.
/// State momenta are velocities; bounces act on the mass momenta
/// (alpha v3, beta v4) with alpha = 1/(1 + c).
Trajectory integrate_restricted(const State<double>& s0, double c, const IntegrationConfig& cfg);

/// Reduced problem in original coordinates with mass momenta. Always uses
/// the adaptive Runge-Kutta method (cfg.method is ignored). With mu > 0 only
/// policy stop is allowed; the run ends at |q3 - q4| = stop_distance.
Trajectory integrate_reduced(const State<double>& s0, const MassParams<double>& m, const IntegrationConfig& cfg);

/// Flow of L in fictitious time tau, with physical time co-integrated via
/// dt/dtau = alpha beta Q3^2. Q3 sign changes are recorded as collisions.
RegTrajectory integrate_regularized(const RegState<double>& r0, double mu, double h, const MassParams<double>& m,
                                    const IntegrationConfig& cfg, double level_tolerance = 1e-8);

/// Advances the restricted flow by dt with one step of the given method.
State<double> restricted_step(const State<double>& s, double dt, Method method);

/// Advances the restricted flow by an arbitrary span using steps no longer than max_dt.
State<double> restricted_advance(const State<double>& s, double span, double max_dt, Method method);

/// Collision events of a restricted trajectory recorded without detection:
/// sign changes of q3 - q4 between consecutive samples, polished to
/// |q3 - q4| < cfg.collision_tolerance by re-integrating from the earlier
/// sample. Plane crossings (|alpha v3 + beta v4| < cfg.plane_tolerance) are
/// flagged as extra events.
std::vector<Event> detect_collisions(const Trajectory& traj, double c, const IntegrationConfig& cfg);

}  // namespace sitnikov
