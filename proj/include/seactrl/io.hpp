#pragma once

#include <string>

#include "seactrl/sim.hpp"

namespace seactrl {

/// Builds a Scenario from JSON text.  Every field is optional: absent keys
/// fall back to the built-in three-joint configuration (matched plant, no
/// gravity, constant zero position references), so "{}" is a complete
/// scenario.  Unknown keys are rejected at every nesting level and the result
/// is fully validated.  Throws ValidationError naming the offending key or
/// constraint.
Scenario parse_scenario(const std::string& json_text);

/// Reads `path` and parses it; errors carry the path.
Scenario load_scenario_file(const std::string& path);

/// Serializes a scenario as a fully explicit JSON document.  Parsing the
/// output yields an identical scenario and an identical serialization.
/// Throws ValidationError for reference trajectories the schema cannot
/// express (custom Trajectory subclasses).
std::string scenario_to_json(const Scenario& sc);

/// One telemetry cell: nine significant digits; exact zeros render as
/// "0.000000000".
std::string format_cell(double v);

/// Writes the telemetry table as CSV, keeping every `decimate`-th row
/// starting with the first.
void write_telemetry_csv(const std::string& path, const Telemetry& tm, int decimate = 1);

std::string metrics_to_json(const Scenario& sc, const RunResult& r);
std::string certificates_to_json(const Scenario& sc, const RunResult& r);

/// Writes telemetry.csv (skipped when metrics_only), metrics.json and
/// certificate.json into `dir`, creating directories as needed.
void write_outputs(const std::string& dir, const Scenario& sc, const RunResult& r,
                   int decimate = 1, bool metrics_only = false);

}  // namespace seactrl
