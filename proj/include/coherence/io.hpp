#pragma once

// Report and state serialization. Complex numbers are [re, im] pairs in JSON;
// CSV floats carry 17 significant digits.

#include <coherence/bell.hpp>
#include <coherence/dynamics.hpp>
#include <coherence/splitting.hpp>

#include <json.hpp>

#include <string>

namespace coherence::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(Complex z);
Complex complex_from_json(const json& j);

json to_json(const SpaceDescriptor& space);
SpaceDescriptor space_from_json(const json& j);

/// {"space": {...}, "amps": [[re, im], ...]}
json to_json(const StateVector& s);
StateVector state_from_json(const json& j);

json to_json(const splitting::ScanStats& stats);
json to_json(const splitting::FactorizationReport& report);
json to_json(const splitting::SeriesSolution& solution);

/// {state_id, strategy, max_value, settings: [[angles]...], n_starts, seed}
json chsh_to_json(const std::string& state_id, const bell::ChshResult& result);

std::string strategy_name(bell::Strategy strategy);

/// t, Re alpha, Im alpha, eta, fidelity
std::string trajectory_csv(const dynamics::Trajectory& trajectory);
/// t, Re zeta, Im zeta, theta, phi, fidelity
std::string trajectory_csv(const dynamics::SpinTrajectory& trajectory);

/// %.17g, so doubles round-trip exactly.
std::string format_double(double x);

}  // namespace coherence::io
