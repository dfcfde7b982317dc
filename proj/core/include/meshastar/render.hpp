#pragma once

#include <string>
#include <string_view>

#include "meshastar/control_set.hpp"
#include "meshastar/grid_map.hpp"
#include "meshastar/trajectory.hpp"

namespace meshastar {

/// Deterministic SVG of a grid and (optionally) a trajectory. Blocked cells
/// are drawn as rect.blocked, swept cells as rect.swept, each primitive as one
/// polyline, and the start/goal states as circle.start / circle.goal.
/// Byte-identical output for identical inputs.
std::string render_svg(const OccupancyGrid& grid, const ControlSet& cs,
                       const Trajectory* trajectory = nullptr, int cell_px = 8);

/// Trajectory file:
/// {"start":[i,j,h],"goal":[i,j,h],"cost":c,"primitives":[{"id":n,"start":[i,j,h]},...]}
std::string save_trajectory(const Trajectory& t);

/// Re-instantiates every primitive from `cs`. Throws ParseError on malformed
/// input or on a primitive whose start heading does not match.
Trajectory load_trajectory(std::string_view json_text, const ControlSet& cs);

}  // namespace meshastar
