#include "sitnikov/io.hpp"

#include <cstdio>
#include <ostream>

namespace sitnikov::io {

namespace {

std::string format(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

std::string fmt_human(double x) { return format("%.12g", x); }
std::string fmt_machine(double x) { return format("%.17g", x); }

void write_samples_csv(std::ostream& os, const std::vector<Sample>& samples, const MassParams<double>& m,
                       bool velocities) {
  os << kStateHeader << '\n';
  for (const auto& s : samples) {
    const State<double> v = velocities ? s.state : to_velocities(s.state, m);
    os << fmt_machine(s.t) << ',' << fmt_machine(s.state.q3) << ',' << fmt_machine(s.state.p3) << ','
       << fmt_machine(s.state.q4) << ',' << fmt_machine(s.state.p4) << ',' << fmt_machine(partial_energy(v.q3, v.p3))
       << ',' << fmt_machine(partial_energy(v.q4, v.p4)) << '\n';
  }
}

void write_events_csv(std::ostream& os, const std::vector<Event>& events) {
  os << "\n# events\n" << kEventHeader << '\n';
  for (const auto& e : events) {
    os << fmt_machine(e.t) << ',' << to_string(e.kind) << ',' << fmt_machine(e.state.q3) << ','
       << fmt_machine(e.state.p3) << ',' << fmt_machine(e.state.q4) << ',' << fmt_machine(e.state.p4) << '\n';
  }
}

void write_regularized_csv(std::ostream& os, const RegTrajectory& traj) {
  os << kRegularizedHeader << '\n';
  for (const auto& s : traj.samples) {
    os << fmt_machine(s.tau) << ',' << fmt_machine(s.t) << ',' << fmt_machine(s.state.Q3) << ','
       << fmt_machine(s.state.Q4) << ',' << fmt_machine(s.state.P3) << ',' << fmt_machine(s.state.P4) << ','
       << fmt_machine(s.L) << '\n';
  }
  os << "\n# events\n" << kRegEventHeader << '\n';
  for (const auto& e : traj.events) {
    os << fmt_machine(e.tau) << ',' << fmt_machine(e.t) << ',' << to_string(e.kind) << ',' << fmt_machine(e.state.Q3)
       << ',' << fmt_machine(e.state.Q4) << ',' << fmt_machine(e.state.P3) << ',' << fmt_machine(e.state.P4) << '\n';
  }
}

void write_atlas_csv(std::ostream& os, const std::vector<ResonantSurface>& surfaces) {
  os << kAtlasHeader << '\n';
  for (const auto& s : surfaces) {
    os << s.triple.p << ',' << s.triple.q << ',' << s.triple.n << ',' << fmt_machine(s.h3) << ','
       << fmt_machine(s.h4) << ',' << fmt_machine(s.h_star) << ',' << fmt_machine(s.tau) << '\n';
  }
}

Json to_json(const State<double>& s) { return {{"q3", s.q3}, {"q4", s.q4}, {"p3", s.p3}, {"p4", s.p4}}; }

Json to_json(const RegState<double>& r) { return {{"Q3", r.Q3}, {"Q4", r.Q4}, {"P3", r.P3}, {"P4", r.P4}}; }

Json to_json(const ResonanceTriple& t) { return {{"p", t.p}, {"q", t.q}, {"n", t.n}}; }

Json to_json(const ResonantSurface& s) {
  return {{"triple", to_json(s.triple)}, {"h3", s.h3}, {"h4", s.h4}, {"h_star", s.h_star}, {"tau", s.tau}};
}

Json to_json(const Trajectory& traj) {
  Json samples = Json::array();
  for (const auto& s : traj.samples) {
    Json row = to_json(s.state);
    row["t"] = s.t;
    samples.push_back(std::move(row));
  }
  Json events = Json::array();
  for (const auto& e : traj.events) {
    Json row = to_json(e.state);
    row["t"] = e.t;
    row["kind"] = to_string(e.kind);
    events.push_back(std::move(row));
  }
  Json out = {{"samples", samples}, {"events", events}, {"terminated", traj.terminated}};
  if (traj.terminated) out["termination_reason"] = traj.termination_reason;
  return out;
}

Json to_json(const RegTrajectory& traj) {
  Json samples = Json::array();
  for (const auto& s : traj.samples) {
    Json row = to_json(s.state);
    row["tau"] = s.tau;
    row["t"] = s.t;
    row["L"] = s.L;
    samples.push_back(std::move(row));
  }
  Json events = Json::array();
  for (const auto& e : traj.events) {
    Json row = to_json(e.state);
    row["tau"] = e.tau;
    row["t"] = e.t;
    row["kind"] = to_string(e.kind);
    events.push_back(std::move(row));
  }
  return {{"samples", samples}, {"events", events}, {"mu", traj.mu}, {"h", traj.h}, {"max_abs_L", traj.max_abs_L()}};
}

State<double> state_from_json(const Json& j) {
  return {j.at("q3").get<double>(), j.at("q4").get<double>(), j.at("p3").get<double>(), j.at("p4").get<double>()};
}

ResonanceTriple triple_from_json(const Json& j) {
  return {j.at("p").get<long>(), j.at("q").get<long>(), j.at("n").get<long>()};
}

ResonantSurface surface_from_json(const Json& j) {
  ResonantSurface s;
  s.triple = triple_from_json(j.at("triple"));
  s.h3 = j.at("h3").get<double>();
  s.h4 = j.at("h4").get<double>();
  s.h_star = j.at("h_star").get<double>();
  s.tau = j.at("tau").get<double>();
  return s;
}

Json envelope(const std::string& command, Json params, Json result, Json meta) {
  return {{"command", command}, {"params", std::move(params)}, {"result", std::move(result)}, {"meta", std::move(meta)}};
}

}  // namespace sitnikov::io
