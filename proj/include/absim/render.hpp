#pragma once

#include <optional>
#include <string>

#include "absim/chart.hpp"
#include "absim/graph.hpp"
#include "absim/sim.hpp"

namespace absim {

// Static map render: land, depth areas shaded by depth, waterway axes,
// planned route, own and target trajectories, start and end markers.
// Output bytes are deterministic for a given input.
std::string render_svg(const ChartFeatureSet& chart, const PlannedRoute& route, const SimLog& log);

} // namespace absim
