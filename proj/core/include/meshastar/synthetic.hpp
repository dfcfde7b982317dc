#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "meshastar/grid_map.hpp"

namespace meshastar {

/// Seeded generator used everywhere randomness is needed. The engine is
/// fully specified by the standard; the helpers below avoid the
/// implementation-defined standard distributions so sequences are portable.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) { return rng() % n; }
inline double uniform01(Rng& rng) { return double(rng() >> 11U) * 0x1.0p-53; }

/// Each cell blocked independently with probability `density`.
OccupancyGrid random_grid(int width, int height, double density, std::uint64_t seed);

/// Perfect maze (recursive backtracker) with corridors `corridor` cells wide
/// separated by walls `wall` cells thick.
OccupancyGrid maze_grid(int width, int height, int corridor, int wall, std::uint64_t seed);

/// Rooms of side `room` separated by one-cell walls with `door`-wide gaps,
/// plus scattered rectangular obstacles.
OccupancyGrid rooms_grid(int width, int height, int room, int door, std::uint64_t seed);

/// Length of the shortest 8-connected path (no corner cutting), or a
/// negative value when the goal is unreachable.
double octile_path_length(const OccupancyGrid& grid, GridCell start, GridCell goal);

/// `count` random start/goal pairs on free, mutually 8-reachable cells at
/// least `min_distance` apart, with 8-connected reference lengths.
std::vector<ScenarioEntry> make_scenarios(const OccupancyGrid& grid, const std::string& map_name,
                                          int count, double min_distance, std::uint64_t seed);

}  // namespace meshastar
