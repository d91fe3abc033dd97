#include "sitnikov/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sitnikov/error.hpp"

namespace sitnikov {

namespace {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

template <int N>
struct StepResult {
  Vec<N> y;
  double err = 0;  // scaled error norm, 0 for fixed-step methods
};

// ---------------------------------------------------------------------------
// Fixed-step symplectic methods for q'' = a(q), state (q3, q4, v3, v4).

Eigen::Vector2d axis_acceleration(const Eigen::Vector2d& q) {
  return {-axis_force_gradient(q(0)), -axis_force_gradient(q(1))};
}

void leapfrog(Eigen::Vector2d& q, Eigen::Vector2d& v, double h) {
  v += 0.5 * h * axis_acceleration(q);
  q += h * v;
  v += 0.5 * h * axis_acceleration(q);
}

// Yoshida's solution A for the sixth-order triple composition.
constexpr double kY1 = -1.17767998417887;
constexpr double kY2 = 0.235573213359357;
constexpr double kY3 = 0.784513610477560;
constexpr double kY0 = 1 - 2 * (kY1 + kY2 + kY3);
constexpr double kYoshida6[7] = {kY3, kY2, kY1, kY0, kY1, kY2, kY3};

Vec<4> fixed_step(const Vec<4>& y, double h, Method method) {
  Eigen::Vector2d q = y.head<2>(), v = y.tail<2>();
  if (method == Method::stormer_verlet) {
    leapfrog(q, v, h);
  } else {
    for (double w : kYoshida6) leapfrog(q, v, w * h);
  }
  Vec<4> out;
  out << q, v;
  return out;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) for autonomous systems.

template <int N, class F>
std::pair<Vec<N>, Vec<N>> dp45_step(const F& f, const Vec<N>& y, double h) {
  const Vec<N> k1 = f(y);
  const Vec<N> k2 = f(Vec<N>(y + h * (1.0 / 5) * k1));
  const Vec<N> k3 = f(Vec<N>(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2)));
  const Vec<N> k4 = f(Vec<N>(y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3)));
  const Vec<N> k5 = f(Vec<N>(
      y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 - 212.0 / 729 * k4)));
  const Vec<N> k6 = f(Vec<N>(y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                                      49.0 / 176 * k4 - 5103.0 / 18656 * k5)));
  const Vec<N> y5 =
      y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 - 2187.0 / 6784 * k5 + 11.0 / 84 * k6);
  const Vec<N> k7 = f(y5);
  const Vec<N> err = h * ((35.0 / 384 - 5179.0 / 57600) * k1 + (500.0 / 1113 - 7571.0 / 16695) * k3 +
                          (125.0 / 192 - 393.0 / 640) * k4 + (-2187.0 / 6784 + 92097.0 / 339200) * k5 +
                          (11.0 / 84 - 187.0 / 2100) * k6 - 1.0 / 40 * k7);
  return {y5, err};
}

template <int N>
double scaled_norm(const Vec<N>& err, const Vec<N>& y0, const Vec<N>& y1, const IntegrationConfig& cfg) {
  double worst = 0;
  for (int i = 0; i < N; ++i) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    worst = std::max(worst, std::abs(err(i)) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Shared driver: stepping, output times, event bracketing and bisection.

enum class Restart { terminate, before_event, after_event };

template <int N>
struct EventOutcome {
  Restart restart = Restart::before_event;
  Vec<N> y;  // state to continue from when restart == before_event
};

int sign_of(double x) { return (x > 0) - (x < 0); }

template <int N, class Step, class Guard, class OnEvent, class OnSample>
void drive(Vec<N> y, double t0, double t_end, bool adaptive, const IntegrationConfig& cfg, const Step& step,
           const Guard* guard, const OnEvent& on_event, const OnSample& on_sample) {
  double t = t0;
  double last_out = -std::numeric_limits<double>::infinity();
  auto sample = [&](double ts, const Vec<N>& ys) {
    if (ts > last_out) {
      on_sample(ts, ys);
      last_out = ts;
    }
  };
  sample(t, y);

  const double span = t_end - t0;
  const long fixed_n = adaptive ? 0 : std::max(1L, long(std::ceil(span / cfg.dt - 1e-9)));
  const double fixed_h = adaptive ? 0 : span / double(fixed_n);
  long node = 0;
  double h = std::min(cfg.dt, span);

  long out_index = 1;
  auto output_time = [&](long k) { return t0 + double(k) * cfg.sample_interval; };
  auto emit_until = [&](double t_from, const Vec<N>& y_from, double t_to, const Vec<N>& y_to) {
    if (cfg.sample_interval <= 0) return;
    while (out_index * cfg.sample_interval < span * (1 - 1e-14) && output_time(out_index) <= t_to) {
      const double to = output_time(out_index);
      sample(to, to == t_to ? y_to : step(y_from, to - t_from).y);
      ++out_index;
    }
  };

  int last_sign = guard ? sign_of((*guard)(y)) : 0;
  int stalled_events = 0;
  long steps = 0;

  while (t < t_end) {
    if (++steps > cfg.max_steps) throw StepFailureError("integration exceeded max_steps");
    double t_b;
    StepResult<N> res;
    if (adaptive) {
      for (;;) {
        t_b = std::min(t + h, t_end);
        const double hh = t_b - t;
        if (hh <= 1e-14 * std::max(1.0, std::abs(t))) throw StepFailureError("step size underflow");
        res = step(y, hh);
        if (!res.y.allFinite()) {
          h = hh / 4;
          continue;
        }
        const double grow = res.err == 0 ? 5.0 : std::clamp(0.9 * std::pow(res.err, -0.2), 0.2, 5.0);
        if (res.err <= 1) {
          h = hh * grow;
          break;
        }
        h = hh * std::min(grow, 0.9);
      }
    } else {
      t_b = node + 1 == fixed_n ? t_end : t0 + double(node + 1) * fixed_h;
      res = step(y, t_b - t);
      if (!res.y.allFinite()) throw StepFailureError("non-finite state in fixed-step integration");
    }

    if (guard) {
      const double g_b = (*guard)(res.y);
      if (last_sign != 0 && sign_of(g_b) == -last_sign) {
        double lo = t, hi = t_b;
        Vec<N> y_lo = y, y_hi = res.y;
        for (int it = 0; it < 60 && std::abs((*guard)(y_lo)) >= cfg.collision_tolerance; ++it) {
          const double mid = 0.5 * (lo + hi);
          const Vec<N> y_mid = step(y, mid - t).y;
          const double g_mid = (*guard)(y_mid);
          if (sign_of(g_mid) == last_sign || g_mid == 0) {
            lo = mid;
            y_lo = y_mid;
          } else {
            hi = mid;
            y_hi = y_mid;
          }
        }
        const EventOutcome<N> outcome = on_event(lo, y_lo, hi, y_hi);
        if (outcome.restart == Restart::terminate) {
          emit_until(t, y, lo, y_lo);
          sample(lo, y_lo);
          return;
        }
        if (lo == t && ++stalled_events > 8) throw NumericalError("repeated event without progress");
        if (lo > t) stalled_events = 0;
        if (outcome.restart == Restart::before_event) {
          emit_until(t, y, lo, y_lo);
          t = lo;
          y = outcome.y;
        } else {
          emit_until(t, y, hi, y_hi);
          t = hi;
          y = y_hi;
          last_sign = -last_sign;
        }
        continue;
      }
      if (sign_of(g_b) != 0) last_sign = sign_of(g_b);
    }

    emit_until(t, y, t_b, res.y);
    t = t_b;
    y = res.y;
    if (!adaptive) ++node;
    if (cfg.sample_interval <= 0 || t == t_end) sample(t, y);
  }
}

Vec<4> to_vec(const State<double>& s) { return s.vector(); }
State<double> to_state(const Vec<4>& v) { return State<double>::from_vector(v); }

double collision_gap(const Vec<4>& y) { return y(0) - y(1); }

}  // namespace

// ---------------------------------------------------------------------------

void IntegrationConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("IntegrationConfig: dt must be > 0");
  if (!(t_max > 0) || !std::isfinite(t_max)) throw DomainError("IntegrationConfig: t_max must be > 0");
  if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("IntegrationConfig: tolerances must be > 0");
  if (!(collision_tolerance > 0) || !(plane_tolerance > 0) || !(stop_distance > 0)) {
    throw DomainError("IntegrationConfig: event tolerances must be > 0");
  }
  if (!(sample_interval >= 0)) throw DomainError("IntegrationConfig: sample_interval must be >= 0");
  if (max_steps < 1) throw DomainError("IntegrationConfig: max_steps must be >= 1");
}

double RegTrajectory::max_abs_L() const {
  double worst = 0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.L));
  return worst;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::stormer_verlet: return "verlet";
    case Method::yoshida6: return "yoshida6";
    case Method::dormand_prince45: return "dp45";
  }
  return "?";
}

std::string to_string(CollisionPolicy p) {
  switch (p) {
    case CollisionPolicy::swap: return "swap";
    case CollisionPolicy::reflect_if_admissible: return "reflect";
    case CollisionPolicy::stop: return "stop";
  }
  return "?";
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::collision: return "collision";
    case EventKind::bounce_applied: return "bounce";
    case EventKind::plane_crossing: return "plane";
    case EventKind::stopped: return "stopped";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "verlet") return Method::stormer_verlet;
  if (s == "yoshida6") return Method::yoshida6;
  if (s == "dp45") return Method::dormand_prince45;
  throw DomainError("unknown method '" + s + "' (expected verlet, yoshida6 or dp45)");
}

CollisionPolicy parse_policy(const std::string& s) {
  if (s == "swap") return CollisionPolicy::swap;
  if (s == "reflect") return CollisionPolicy::reflect_if_admissible;
  if (s == "stop") return CollisionPolicy::stop;
  throw DomainError("unknown collision policy '" + s + "' (expected swap, reflect or stop)");
}

State<double> restricted_step(const State<double>& s, double dt, Method method) {
  if (method == Method::dormand_prince45) {
    auto f = [](const Vec<4>& y) {
      Vec<4> d;
      d << y(2), y(3), -axis_force_gradient(y(0)), -axis_force_gradient(y(1));
      return d;
    };
    return to_state(dp45_step<4>(f, to_vec(s), dt).first);
  }
  return to_state(fixed_step(to_vec(s), dt, method));
}

State<double> restricted_advance(const State<double>& s, double span, double max_dt, Method method) {
  if (span == 0) return s;
  const long n = std::max(1L, long(std::ceil(std::abs(span) / max_dt - 1e-9)));
  const double h = span / double(n);
  State<double> out = s;
  for (long i = 0; i < n; ++i) out = restricted_step(out, h, method);
  return out;
}

Trajectory integrate_restricted(const State<double>& s0, double c, const IntegrationConfig& cfg) {
  cfg.validate();
  const MassParams<double> m = MassParams<double>::from_ratio(c, 0.0);
  const bool adaptive = cfg.method == Method::dormand_prince45;
  Trajectory traj;

  auto field = [](const Vec<4>& y) {
    Vec<4> d;
    d << y(2), y(3), -axis_force_gradient(y(0)), -axis_force_gradient(y(1));
    return d;
  };
  auto step = [&](const Vec<4>& y, double h) -> StepResult<4> {
    if (!adaptive) return {fixed_step(y, h, cfg.method), 0.0};
    const auto [y5, err] = dp45_step<4>(field, y, h);
    return {y5, scaled_norm<4>(err, y, y5, cfg)};
  };

  auto on_event = [&](double t_lo, const Vec<4>& y_lo, double, const Vec<4>&) -> EventOutcome<4> {
    const State<double> sv = to_state(y_lo);
    const State<double> pm = from_velocities(sv, m);
    traj.events.push_back({t_lo, EventKind::collision, sv});
    const bool on_plane = std::abs(pm.p3 + pm.p4) < cfg.plane_tolerance;
    if (on_plane) traj.events.push_back({t_lo, EventKind::plane_crossing, sv});

    State<double> post;
    switch (cfg.collision_policy) {
      case CollisionPolicy::swap:
        post = {sv.q3, sv.q4, sv.p4, sv.p3};
        break;
      case CollisionPolicy::reflect_if_admissible:
        if (!m.equal_masses() && !on_plane) {
          traj.events.push_back({t_lo, EventKind::stopped, sv});
          traj.terminated = true;
          traj.termination_reason = "inadmissible collision: alpha != 1/2 and p3 + p4 != 0";
          return {Restart::terminate, y_lo};
        }
        post = to_velocities(
            bounce_map(pm, m, std::max(cfg.collision_tolerance, 2 * std::abs(sv.q3 - sv.q4))), m);
        break;
      case CollisionPolicy::stop:
        traj.events.push_back({t_lo, EventKind::stopped, sv});
        traj.terminated = true;
        traj.termination_reason = "collision with policy stop";
        return {Restart::terminate, y_lo};
    }
    traj.events.push_back({t_lo, EventKind::bounce_applied, post});
    return {Restart::before_event, to_vec(post)};
  };
  auto on_sample = [&](double t, const Vec<4>& y) { traj.samples.push_back({t, to_state(y)}); };

  auto guard = &collision_gap;
  drive<4>(to_vec(s0), 0.0, cfg.t_max, adaptive, cfg, step, cfg.detect_collisions ? &guard : nullptr, on_event,
           on_sample);
  return traj;
}

Trajectory integrate_reduced(const State<double>& s0, const MassParams<double>& m, const IntegrationConfig& cfg) {
  cfg.validate();
  if (m.mu > 0 && cfg.collision_policy != CollisionPolicy::stop) {
    throw DomainError("integrate_reduced: mu > 0 requires policy stop (use the regularized flow to pass collisions)");
  }
  if (m.mu > 0 && std::abs(s0.q3 - s0.q4) <= cfg.stop_distance) {
    throw SingularityError("integrate_reduced: initial state lies within the collision stop distance");
  }
  Trajectory traj;
  auto field = [&](const Vec<4>& y) { return vector_field_original(to_state(y), m); };
  auto step = [&](const Vec<4>& y, double h) -> StepResult<4> {
    const auto [y5, err] = dp45_step<4>(field, y, h);
    return {y5, scaled_norm<4>(err, y, y5, cfg)};
  };

  const double stop_distance = cfg.stop_distance;
  auto gap = [](const Vec<4>& y) { return y(0) - y(1); };
  auto distance_guard = [stop_distance](const Vec<4>& y) { return std::abs(y(0) - y(1)) - stop_distance; };

  auto on_event = [&](double t_lo, const Vec<4>& y_lo, double, const Vec<4>&) -> EventOutcome<4> {
    const State<double> s = to_state(y_lo);
    traj.events.push_back({t_lo, EventKind::collision, s});
    const bool on_plane = std::abs(s.p3 + s.p4) < cfg.plane_tolerance;
    if (on_plane) traj.events.push_back({t_lo, EventKind::plane_crossing, s});
    const bool admissible = cfg.collision_policy == CollisionPolicy::swap ||
                            (cfg.collision_policy == CollisionPolicy::reflect_if_admissible &&
                             (m.equal_masses() || on_plane));
    if (m.mu > 0 || !admissible) {
      traj.events.push_back({t_lo, EventKind::stopped, s});
      traj.terminated = true;
      traj.termination_reason = m.mu > 0 ? "reached collision stop distance" : "collision not continued by policy";
      return {Restart::terminate, y_lo};
    }
    const State<double> post = cfg.collision_policy == CollisionPolicy::swap
                                   ? State<double>{s.q3, s.q4, s.p4, s.p3}
                                   : bounce_map(s, m, std::max(cfg.collision_tolerance, 2 * std::abs(s.q3 - s.q4)));
    traj.events.push_back({t_lo, EventKind::bounce_applied, post});
    return {Restart::before_event, to_vec(post)};
  };
  auto on_sample = [&](double t, const Vec<4>& y) { traj.samples.push_back({t, to_state(y)}); };

  if (m.mu > 0) {
    IntegrationConfig local = cfg;
    local.collision_tolerance = stop_distance * 1e-4;
    auto guard = std::function<double(const Vec<4>&)>(distance_guard);
    drive<4>(to_vec(s0), 0.0, cfg.t_max, true, local, step, &guard, on_event, on_sample);
  } else {
    auto guard = std::function<double(const Vec<4>&)>(gap);
    drive<4>(to_vec(s0), 0.0, cfg.t_max, true, cfg, step, cfg.detect_collisions ? &guard : nullptr, on_event,
             on_sample);
  }
  return traj;
}

RegTrajectory integrate_regularized(const RegState<double>& r0, double mu, double h, const MassParams<double>& m,
                                    const IntegrationConfig& cfg, double level_tolerance) {
  cfg.validate();
  if (!(mu >= 0)) throw DomainError("integrate_regularized: mu must be >= 0");
  const double level = hamiltonian_regularized(r0, mu, h, m);
  if (!(std::abs(level) <= level_tolerance)) {
    throw InvalidLevelError("integrate_regularized: |L(r0)| = " + std::to_string(std::abs(level)) +
                            " is off the L = 0 level");
  }
  RegTrajectory traj;
  traj.mu = mu;
  traj.h = h;
  const double ab = m.alpha * m.beta;

  auto field = [&](const Vec<5>& y) {
    const RegState<double> r{y(0), y(1), y(2), y(3)};
    Vec<5> d;
    d << regularized_vector_field(r, h, m), ab * y(0) * y(0);
    return d;
  };
  auto step = [&](const Vec<5>& y, double dtau) -> StepResult<5> {
    const auto [y5, err] = dp45_step<5>(field, y, dtau);
    return {y5, scaled_norm<5>(err, y, y5, cfg)};
  };
  auto reg_of = [](const Vec<5>& y) { return RegState<double>{y(0), y(1), y(2), y(3)}; };
  auto on_event = [&](double, const Vec<5>&, double tau_hi, const Vec<5>& y_hi) -> EventOutcome<5> {
    traj.events.push_back({tau_hi, y_hi(4), EventKind::collision, reg_of(y_hi)});
    return {Restart::after_event, y_hi};
  };
  auto on_sample = [&](double tau, const Vec<5>& y) {
    const RegState<double> r = reg_of(y);
    traj.samples.push_back({tau, y(4), r, hamiltonian_regularized(r, mu, h, m)});
  };

  Vec<5> y0;
  y0 << r0.vector(), 0.0;
  auto guard = std::function<double(const Vec<5>&)>([](const Vec<5>& y) { return y(0); });
  drive<5>(y0, 0.0, cfg.t_max, true, cfg, step, cfg.detect_collisions ? &guard : nullptr, on_event, on_sample);
  return traj;
}

std::vector<Event> detect_collisions(const Trajectory& traj, double c, const IntegrationConfig& cfg) {
  const MassParams<double> m = MassParams<double>::from_ratio(c, 0.0);
  const Method method = cfg.method;
  std::vector<Event> events;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const Sample& a = traj.samples[i - 1];
    const Sample& b = traj.samples[i];
    const double ga = a.state.q3 - a.state.q4;
    const double gb = b.state.q3 - b.state.q4;
    if (!(sign_of(ga) != 0 && sign_of(gb) == -sign_of(ga))) continue;
    double lo = a.t, hi = b.t;
    State<double> s_lo = a.state;
    for (int it = 0; it < 60 && std::abs(s_lo.q3 - s_lo.q4) >= cfg.collision_tolerance; ++it) {
      const double mid = 0.5 * (lo + hi);
      const State<double> s_mid = restricted_advance(a.state, mid - a.t, cfg.dt, method);
      const double g = s_mid.q3 - s_mid.q4;
      if (sign_of(g) == sign_of(ga) || g == 0) {
        lo = mid;
        s_lo = s_mid;
      } else {
        hi = mid;
      }
    }
    events.push_back({lo, EventKind::collision, s_lo});
    const State<double> pm = from_velocities(s_lo, m);
    if (std::abs(pm.p3 + pm.p4) < cfg.plane_tolerance) events.push_back({lo, EventKind::plane_crossing, s_lo});
  }
  return events;
}

}  // namespace sitnikov
