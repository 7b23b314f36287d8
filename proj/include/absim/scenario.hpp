#pragma once

#include <string>

#include "absim/sim.hpp"

namespace absim {

// Loads and validates a version-1 scenario document. Paths inside the
// document (chart, ship file) resolve relative to the scenario file.
ScenarioConfig load_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_json(const std::string& text, const std::string& base_dir);

// Output writers. All files are written atomically (temp + rename).
void write_trajectory_csv(const std::string& path, const SimLog& log);
void write_metrics_json(const std::string& path, const MetricsReport& metrics, SimOutcome outcome);
void write_route_geojson(const std::string& path, const PlannedRoute& route,
                         const Projection& proj);
std::string trajectory_csv_header(std::size_t target_count);

void write_file_atomic(const std::string& path, const std::string& content);

} // namespace absim
