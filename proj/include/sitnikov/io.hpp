#pragma once
// CSV and JSON serialization of states, trajectories and resonance data.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sitnikov/integrator.hpp"
#include "sitnikov/resonance.hpp"

namespace sitnikov::io {

using Json = nlohmann::ordered_json;

/// 12 significant digits.
std::string fmt_human(double x);
/// 17 significant digits, exact round trip.
std::string fmt_machine(double x);

inline constexpr const char* kStateHeader = "t,q3,p3,q4,p4,h3,h4";
inline constexpr const char* kEventHeader = "t,kind,q3,p3,q4,p4";
inline constexpr const char* kRegularizedHeader = "tau,t,Q3,Q4,P3,P4,L";
inline constexpr const char* kRegEventHeader = "tau,t,kind,Q3,Q4,P3,P4";
inline constexpr const char* kAtlasHeader = "p,q,n,h3,h4,h_star,tau";

/// Rows t,q3,p3,q4,p4,h3,h4. Momentum columns are divided by the masses
/// (alpha, beta) for the partial energies unless they already are velocities.
void write_samples_csv(std::ostream& os, const std::vector<Sample>& samples, const MassParams<double>& m,
                       bool velocities);

/// Blank line, "# events", header, then one row per event.
void write_events_csv(std::ostream& os, const std::vector<Event>& events);

void write_regularized_csv(std::ostream& os, const RegTrajectory& traj);
void write_atlas_csv(std::ostream& os, const std::vector<ResonantSurface>& surfaces);

Json to_json(const State<double>& s);
Json to_json(const RegState<double>& r);
Json to_json(const ResonanceTriple& t);
Json to_json(const ResonantSurface& s);
Json to_json(const Trajectory& traj);
Json to_json(const RegTrajectory& traj);

State<double> state_from_json(const Json& j);
ResonanceTriple triple_from_json(const Json& j);
ResonantSurface surface_from_json(const Json& j);

/// {"command", "params", "result", "meta"}.
Json envelope(const std::string& command, Json params, Json result, Json meta);

}  // namespace sitnikov::io
