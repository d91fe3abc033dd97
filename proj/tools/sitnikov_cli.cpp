// sitnikov: command-line front end for the double Sitnikov library.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
// 3 numerical failure.

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sitnikov/dynamics.hpp"
#include "sitnikov/error.hpp"
#include "sitnikov/integrator.hpp"
#include "sitnikov/io.hpp"
#include "sitnikov/quadrature.hpp"
#include "sitnikov/resonance.hpp"
#include "sitnikov/solution.hpp"
#include "sitnikov/verification.hpp"

namespace {

using namespace sitnikov;
using io::fmt_human;
using io::fmt_machine;
using io::Json;

constexpr const char* kVersion = "1.0.0";

enum class Format { human, csv, json };

struct Context {
  Format format = Format::human;
  double tolerance = kDefaultVerifyTolerance;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Json meta() const {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return {{"version", kVersion}, {"tolerance", tolerance}, {"wall_time_ms", ms}};
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_json(const Context& ctx, const std::string& command, Json params, Json result) {
  std::cout << io::envelope(command, std::move(params), std::move(result), ctx.meta()).dump(2) << '\n';
}

// Named scalar results in the three formats.
void emit_scalars(const Context& ctx, const std::string& command, const Json& params,
                  const std::vector<std::pair<std::string, double>>& values) {
  switch (ctx.format) {
    case Format::human:
      for (const auto& [name, v] : values) std::cout << name << " = " << fmt_human(v) << '\n';
      break;
    case Format::csv: {
      std::string sep;
      for (const auto& kv : values) {
        std::cout << sep << kv.first;
        sep = ",";
      }
      std::cout << '\n';
      sep.clear();
      for (const auto& kv : values) {
        std::cout << sep << fmt_machine(kv.second);
        sep = ",";
      }
      std::cout << '\n';
      break;
    }
    case Format::json: {
      Json result = Json::object();
      for (const auto& [name, v] : values) result[name] = v;
      emit_json(ctx, command, params, result);
      break;
    }
  }
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

// Relative disagreement with an independent quadrature, NaN if it fails.
template <class F>
double cross_check(double value, const F& oracle) {
  try {
    return relative_gap(value, oracle());
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// ---------------------------------------------------------------------------

int cmd_period(const Context& ctx, double h) {
  const double t = period_T(h);
  emit_scalars(ctx, "period", {{"h", h}},
               {{"T", t},
                {"T_over_2pi", t / (2 * std::numbers::pi)},
                {"k", modulus_from_energy(h)},
                {"rel_tol_estimate", cross_check(t, [&] { return quadrature::period_by_quadrature(h); })}});
  return 0;
}

int cmd_action(const Context& ctx, double h) {
  const double j = action_J(h);
  emit_scalars(ctx, "action", {{"h", h}},
               {{"J", j},
                {"k", modulus_from_energy(h)},
                {"rel_tol_estimate", cross_check(j, [&] { return quadrature::action_by_quadrature(h); })}});
  return 0;
}

int cmd_qmax(const Context& ctx, double h) {
  if (!(h > -2 && h < 0)) throw DomainError("qmax: energy h must lie in (-2, 0), got " + fmt_human(h));
  const double q = q_max(h);
  emit_scalars(ctx, "qmax", {{"h", h}},
               {{"q_max", q}, {"k", modulus_from_energy(h)}, {"rel_tol_estimate", std::abs(h + axis_potential(q)) / -h}});
  return 0;
}

void print_human_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string sep;
  for (const auto& name : header) {
    std::cout << sep << name;
    sep = " ";
  }
  std::cout << '\n';
  for (const auto& row : rows) {
    sep.clear();
    for (double v : row) {
      std::cout << sep << fmt_human(v);
      sep = " ";
    }
    std::cout << '\n';
  }
}

std::vector<std::vector<double>> state_rows(const std::vector<Sample>& samples, const MassParams<double>& m,
                                            bool velocities) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : samples) {
    const State<double> v = velocities ? s.state : to_velocities(s.state, m);
    rows.push_back({s.t, s.state.q3, s.state.p3, s.state.q4, s.state.p4, partial_energy(v.q3, v.p3),
                    partial_energy(v.q4, v.p4)});
  }
  return rows;
}

const std::vector<std::string> kStateColumns = {"t", "q3", "p3", "q4", "p4", "h3", "h4"};

int cmd_solve(const Context& ctx, double h3, double h4, double t_max, double dt_out, double nu3, double nu4) {
  if (!(t_max >= 0)) throw UsageError("solve: --t-max must be >= 0");
  if (!(dt_out > 0)) throw UsageError("solve: --dt-out must be > 0");
  const EnergyPair<double> ep{h3, h4};
  const PhaseOffsets<double> phases{nu3, nu4};
  std::vector<Sample> samples;
  const long n = long(std::floor(t_max / dt_out + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double t = double(i) * dt_out;
    samples.push_back({t, analytic_state(t, ep, phases)});
  }
  const auto m = MassParams<double>::from_ratio(1.0);
  const Json params = {{"h3", h3}, {"h4", h4}, {"t_max", t_max}, {"dt_out", dt_out}, {"phase3", nu3}, {"phase4", nu4}};
  switch (ctx.format) {
    case Format::csv:
      io::write_samples_csv(std::cout, samples, m, true);
      break;
    case Format::human:
      print_human_table(kStateColumns, state_rows(samples, m, true));
      break;
    case Format::json: {
      Json rows = Json::array();
      for (const auto& s : samples) {
        Json row = io::to_json(s.state);
        row["t"] = s.t;
        row["h3"] = partial_energy(s.state.q3, s.state.p3);
        row["h4"] = partial_energy(s.state.q4, s.state.p4);
        rows.push_back(std::move(row));
      }
      emit_json(ctx, "solve", params, {{"samples", rows}});
      break;
    }
  }
  return 0;
}

struct IntegrateArgs {
  std::optional<double> h3, h4;
  std::vector<double> state;
  double c = 1;
  double mu = 0;
  bool regularized = false;
  std::string policy = "swap";
  std::string method = "yoshida6";
  double t_max = 1;
  double dt = 1e-3;
  double dt_out = 0;
  double nu3 = 0, nu4 = 0;
  double abs_tol = 1e-12, rel_tol = 1e-12;
  double stop_distance = 1e-6;
};

int cmd_integrate(const Context& ctx, const IntegrateArgs& a) {
  IntegrationConfig cfg;
  cfg.t_max = a.t_max;
  cfg.dt = a.dt;
  cfg.sample_interval = a.dt_out;
  cfg.abs_tol = a.abs_tol;
  cfg.rel_tol = a.rel_tol;
  cfg.collision_policy = parse_policy(a.policy);
  cfg.method = parse_method(a.method);
  cfg.stop_distance = a.stop_distance;
  cfg.validate();

  if (a.mu > 0 && !a.regularized && cfg.collision_policy != CollisionPolicy::stop) {
    throw UsageError("integrate: --mu > 0 requires --regularized or --policy stop");
  }
  const bool from_energies = a.h3.has_value() || a.h4.has_value();
  if (from_energies == !a.state.empty()) {
    throw UsageError("integrate: give either --h3/--h4 or --state q3,q4,p3,p4");
  }
  if (from_energies && !(a.h3 && a.h4)) throw UsageError("integrate: --h3 and --h4 must be given together");
  const auto m = MassParams<double>::from_ratio(a.c, a.mu);

  // The restricted run works with velocities, the others with mass momenta.
  const bool velocities = a.mu == 0 && !a.regularized;
  State<double> start;
  if (from_energies) {
    start = analytic_state(0.0, EnergyPair<double>{*a.h3, *a.h4}, PhaseOffsets<double>{a.nu3, a.nu4});
    if (!velocities) start = from_velocities(start, m);
  } else {
    if (a.state.size() != 4) throw UsageError("integrate: --state takes exactly four numbers");
    start = {a.state[0], a.state[1], a.state[2], a.state[3]};
  }

  Json params = {{"c", a.c},        {"mu", a.mu},           {"regularized", a.regularized},
                 {"policy", a.policy}, {"method", a.method}, {"t_max", a.t_max},
                 {"dt", a.dt},       {"dt_out", a.dt_out}};
  if (from_energies) {
    params["h3"] = *a.h3;
    params["h4"] = *a.h4;
    params["phase3"] = a.nu3;
    params["phase4"] = a.nu4;
  } else {
    params["state"] = a.state;
  }

  if (a.regularized) {
    if (start.q3 == start.q4) {
      throw DomainError("integrate: the regularized start must have q3 != q4 (rho's momenta are undefined at Q3 = 0)");
    }
    const double h = hamiltonian_reduced(start, m);
    const RegState<double> r0 = rho_inverse(start, m, start.q3 > start.q4 ? 1 : -1);
    const RegTrajectory traj = integrate_regularized(r0, a.mu, h, m, cfg);
    params["h"] = h;
    switch (ctx.format) {
      case Format::csv:
        io::write_regularized_csv(std::cout, traj);
        break;
      case Format::human: {
        std::vector<std::vector<double>> rows;
        for (const auto& s : traj.samples) rows.push_back({s.tau, s.t, s.state.Q3, s.state.Q4, s.state.P3, s.state.P4, s.L});
        print_human_table({"tau", "t", "Q3", "Q4", "P3", "P4", "L"}, rows);
        std::cout << "# collisions crossed: " << traj.events.size() << ", max |L| = " << fmt_human(traj.max_abs_L())
                  << '\n';
        break;
      }
      case Format::json:
        emit_json(ctx, "integrate", params, io::to_json(traj));
        break;
    }
    return 0;
  }

  const Trajectory traj = velocities ? integrate_restricted(start, a.c, cfg) : integrate_reduced(start, m, cfg);
  switch (ctx.format) {
    case Format::csv:
      io::write_samples_csv(std::cout, traj.samples, m, velocities);
      io::write_events_csv(std::cout, traj.events);
      break;
    case Format::human:
      print_human_table(kStateColumns, state_rows(traj.samples, m, velocities));
      std::cout << "# events\n";
      for (const auto& e : traj.events) {
        std::cout << fmt_human(e.t) << ' ' << to_string(e.kind) << ' ' << fmt_human(e.state.q3) << ' '
                  << fmt_human(e.state.p3) << ' ' << fmt_human(e.state.q4) << ' ' << fmt_human(e.state.p4) << '\n';
      }
      if (traj.terminated) std::cout << "# terminated: " << traj.termination_reason << '\n';
      break;
    case Format::json:
      emit_json(ctx, "integrate", params, io::to_json(traj));
      break;
  }
  return 0;
}

int cmd_resonances(const Context& ctx, long p_max, bool all_triples) {
  if (p_max < 1) throw UsageError("resonances: --p-max must be >= 1");
  std::vector<ResonantSurface> rows;
  long n_triples = 0;
  for (long p = 1; p <= p_max; ++p) n_triples += long(enumerate_triples(p).size());
  const std::vector<ResonantSurface> surfaces = atlas(p_max);
  if (all_triples) {
    for (long p = 1; p <= p_max; ++p) {
      for (const auto& t : enumerate_triples(p)) rows.push_back(resonant_surface(t));
    }
  } else {
    rows = surfaces;
  }
  const Json params = {{"p_max", p_max}, {"all_triples", all_triples}};
  switch (ctx.format) {
    case Format::csv:
      io::write_atlas_csv(std::cout, rows);
      break;
    case Format::human:
      std::cout << "triples = " << n_triples << "\ndistinct h_star = " << surfaces.size() << '\n';
      std::cout << "p q n h3 h4 h_star tau\n";
      for (const auto& s : rows) {
        std::cout << s.triple.p << ' ' << s.triple.q << ' ' << s.triple.n << ' ' << fmt_human(s.h3) << ' '
                  << fmt_human(s.h4) << ' ' << fmt_human(s.h_star) << ' ' << fmt_human(s.tau) << '\n';
      }
      break;
    case Format::json: {
      Json list = Json::array();
      for (const auto& s : rows) list.push_back(io::to_json(s));
      emit_json(ctx, "resonances", params,
                {{"triples", n_triples}, {"distinct_h_star", surfaces.size()}, {"surfaces", list}});
      break;
    }
  }
  return 0;
}

int cmd_classify(const Context& ctx, std::optional<double> h, std::optional<double> h3, std::optional<double> h4) {
  if (h.has_value() == (h3.has_value() || h4.has_value())) {
    throw UsageError("classify: give either --h or both --h3 and --h4");
  }
  if (h) {
    const std::string lbl = label(classify_surface(*h));
    const MomentumLine line = momentum_line(*h);
    switch (ctx.format) {
      case Format::human:
        std::cout << lbl << '\n'
                  << "momentum line from (" << fmt_human(line.start[0]) << ", " << fmt_human(line.start[1]) << ") to ("
                  << fmt_human(line.end[0]) << ", " << fmt_human(line.end[1]) << ")\n";
        break;
      case Format::csv:
        std::cout << "h,label,h3_start,h4_start,h3_end,h4_end\n"
                  << fmt_machine(*h) << ',' << lbl << ',' << fmt_machine(line.start[0]) << ','
                  << fmt_machine(line.start[1]) << ',' << fmt_machine(line.end[0]) << ',' << fmt_machine(line.end[1])
                  << '\n';
        break;
      case Format::json:
        emit_json(ctx, "classify", {{"h", *h}},
                  {{"label", lbl}, {"momentum_line", {{"start", line.start}, {"end", line.end}}}});
        break;
    }
    return 0;
  }
  if (!(h3 && h4)) throw UsageError("classify: --h3 and --h4 must be given together");
  const std::string lbl = label(classify_fiber(*h3, *h4));
  switch (ctx.format) {
    case Format::human:
      std::cout << lbl << '\n';
      break;
    case Format::csv:
      std::cout << "h3,h4,label\n" << fmt_machine(*h3) << ',' << fmt_machine(*h4) << ',' << lbl << '\n';
      break;
    case Format::json:
      emit_json(ctx, "classify", {{"h3", *h3}, {"h4", *h4}}, {{"label", lbl}});
      break;
  }
  return 0;
}

int cmd_check_rational(const Context& ctx, double h3, double h4, long q_max, double tol) {
  const auto triple = rational_point_check(h3, h4, q_max, tol);
  const Json params = {{"h3", h3}, {"h4", h4}, {"qmax", q_max}, {"tol", tol}};
  switch (ctx.format) {
    case Format::human:
      if (triple) {
        std::cout << "triple = (" << triple->p << ", " << triple->q << ", " << triple->n << ")\n"
                  << "tau = " << fmt_human(2 * std::numbers::pi * double(triple->p)) << '\n';
      } else {
        std::cout << "none\n";
      }
      break;
    case Format::csv:
      std::cout << "found,p,q,n\n";
      if (triple) {
        std::cout << "1," << triple->p << ',' << triple->q << ',' << triple->n << '\n';
      } else {
        std::cout << "0,,,\n";
      }
      break;
    case Format::json:
      emit_json(ctx, "check-rational", params,
                triple ? Json{{"found", true}, {"triple", io::to_json(*triple)}} : Json{{"found", false}});
      break;
  }
  return 0;
}

int cmd_verify(const Context& ctx) {
  const std::vector<CheckResult> checks = run_verification(ctx.tolerance);
  bool ok = true;
  Json list = Json::array();
  for (const auto& c : checks) {
    ok = ok && c.passed;
    list.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"residual", c.residual},
                    {"tolerance", c.tolerance},
                    {"note", c.note}});
  }
  switch (ctx.format) {
    case Format::json:
      emit_json(ctx, "verify", {{"tolerance", ctx.tolerance}}, {{"passed", ok}, {"checks", list}});
      break;
    case Format::csv:
      std::cout << "name,passed,residual,tolerance\n";
      for (const auto& c : checks) {
        std::cout << c.name << ',' << (c.passed ? 1 : 0) << ',' << fmt_machine(c.residual) << ','
                  << fmt_machine(c.tolerance) << '\n';
      }
      break;
    case Format::human:
      for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  residual=" << fmt_human(c.residual)
                  << "  tol=" << fmt_human(c.tolerance);
        if (!c.note.empty()) std::cout << "  (" << c.note << ")";
        std::cout << '\n';
      }
      std::cout << (ok ? "all invariants passed" : "verification FAILED") << '\n';
      break;
  }
  if (!ok) {
    for (const auto& c : checks) {
      if (!c.passed) std::cerr << "failed invariant: " << c.name << '\n';
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circular double Sitnikov problem: closed forms, integration and resonances"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kVersion);

  Context ctx;
  ctx.tolerance = verification_tolerance_from_env();
  std::string format = "human";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "csv", "json"}));

  double h = 0;
  auto* period = app.add_subcommand("period", "Period T(h) of one secondary");
  period->add_option("--h", h, "Energy in (-2, 0)")->required();
  auto* action = app.add_subcommand("action", "Action J(h) of the closed orbit");
  action->add_option("--h", h, "Energy in (-2, 0)")->required();
  auto* qmax = app.add_subcommand("qmax", "Turning point q_max(h)");
  qmax->add_option("--h", h, "Energy in (-2, 0)")->required();

  double h3 = 0, h4 = 0, t_max = 10, dt_out = 0.1, nu3 = 0, nu4 = 0;
  auto* solve = app.add_subcommand("solve", "Sample the analytic solution");
  solve->add_option("--h3", h3, "Energy of body 3 in (-2, 0)")->required();
  solve->add_option("--h4", h4, "Energy of body 4 in (-2, 0)")->required();
  solve->add_option("--t-max", t_max, "End time")->capture_default_str();
  solve->add_option("--dt-out", dt_out, "Output spacing")->capture_default_str();
  solve->add_option("--phase3", nu3, "Elliptic argument of body 3 at t = 0")->capture_default_str();
  solve->add_option("--phase4", nu4, "Elliptic argument of body 4 at t = 0")->capture_default_str();

  IntegrateArgs ia;
  double ia_h3 = 0, ia_h4 = 0;
  auto* integrate = app.add_subcommand("integrate", "Numerically integrate the restricted, reduced or regularized flow");
  auto* opt_h3 = integrate->add_option("--h3", ia_h3, "Start on the analytic orbit with this energy for body 3");
  auto* opt_h4 = integrate->add_option("--h4", ia_h4, "Start on the analytic orbit with this energy for body 4");
  integrate->add_option("--state", ia.state, "Initial q3 q4 p3 p4 (velocities if mu = 0, else mass momenta)")
      ->delimiter(',')
      ->expected(4);
  integrate->add_option("--c", ia.c, "Mass ratio in (0, 1]")->capture_default_str();
  integrate->add_option("--mu", ia.mu, "Secondary mass mu >= 0")->capture_default_str();
  integrate->add_flag("--regularized", ia.regularized, "Integrate the regularized flow in fictitious time");
  integrate->add_option("--policy", ia.policy, "Collision policy")
      ->check(CLI::IsMember({"swap", "reflect", "stop"}))
      ->capture_default_str();
  integrate->add_option("--method", ia.method, "Restricted integrator")
      ->check(CLI::IsMember({"verlet", "yoshida6", "dp45"}))
      ->capture_default_str();
  integrate->add_option("--t-max", ia.t_max, "End time (tau for --regularized)")->capture_default_str();
  integrate->add_option("--dt", ia.dt, "Step (initial step for adaptive runs)")->capture_default_str();
  integrate->add_option("--dt-out", ia.dt_out, "Output spacing, 0 for every step")->capture_default_str();
  integrate->add_option("--phase3", ia.nu3, "Elliptic argument of body 3 at t = 0")->capture_default_str();
  integrate->add_option("--phase4", ia.nu4, "Elliptic argument of body 4 at t = 0")->capture_default_str();
  integrate->add_option("--abs-tol", ia.abs_tol, "Absolute tolerance (adaptive)")->capture_default_str();
  integrate->add_option("--rel-tol", ia.rel_tol, "Relative tolerance (adaptive)")->capture_default_str();
  integrate->add_option("--stop-distance", ia.stop_distance, "Reduced run stops at this |q3 - q4|")
      ->capture_default_str();

  long p_max = 1;
  bool all_triples = false;
  auto* resonances = app.add_subcommand("resonances", "Atlas of resonant energy surfaces");
  resonances->add_option("--p-max", p_max, "Largest p")->capture_default_str();
  resonances->add_flag("--all-triples", all_triples, "List every triple instead of distinct surfaces");

  double ch = 0, ch3 = 0, ch4 = 0;
  auto* classify = app.add_subcommand("classify", "Topology of an energy surface or a momentum-map fiber");
  auto* opt_ch = classify->add_option("--h", ch, "Total energy");
  auto* opt_ch3 = classify->add_option("--h3", ch3, "Partial energy of body 3");
  auto* opt_ch4 = classify->add_option("--h4", ch4, "Partial energy of body 4");

  double rh3 = 0, rh4 = 0, rtol = 1e-9;
  long rq = 10000;
  auto* check = app.add_subcommand("check-rational", "Recover a resonance triple from (h3, h4)");
  check->add_option("--h3", rh3, "Energy of body 3")->required();
  check->add_option("--h4", rh4, "Energy of body 4")->required();
  check->add_option("--qmax", rq, "Denominator cap")->capture_default_str();
  check->add_option("--tol", rtol, "Rational match tolerance")->capture_default_str();

  std::optional<double> verify_tol;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--tol", verify_tol, "Override SITNIKOV_TOL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ctx.format = format == "csv" ? Format::csv : format == "json" ? Format::json : Format::human;
  std::cout.precision(17);
  try {
    if (*period) return cmd_period(ctx, h);
    if (*action) return cmd_action(ctx, h);
    if (*qmax) return cmd_qmax(ctx, h);
    if (*solve) return cmd_solve(ctx, h3, h4, t_max, dt_out, nu3, nu4);
    if (*integrate) {
      if (*opt_h3) ia.h3 = ia_h3;
      if (*opt_h4) ia.h4 = ia_h4;
      return cmd_integrate(ctx, ia);
    }
    if (*resonances) return cmd_resonances(ctx, p_max, all_triples);
    if (*classify) {
      return cmd_classify(ctx, *opt_ch ? std::optional<double>(ch) : std::nullopt,
                          *opt_ch3 ? std::optional<double>(ch3) : std::nullopt,
                          *opt_ch4 ? std::optional<double>(ch4) : std::nullopt);
    }
    if (*check) return cmd_check_rational(ctx, rh3, rh4, rq, rtol);
    if (*verify) {
      if (verify_tol) {
        if (!(*verify_tol > 0)) throw UsageError("verify: --tol must be > 0");
        ctx.tolerance = *verify_tol;
      }
      return cmd_verify(ctx);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
