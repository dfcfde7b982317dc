#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "meshastar/control_set.hpp"
#include "meshastar/grid_map.hpp"
#include "meshastar/mesh_graph.hpp"
#include "meshastar/trajectory.hpp"

namespace meshastar {

/// One planning query. The referenced objects must outlive every planner
/// call that uses the request. `tables` is required by the mesh planners and
/// must have been built for `control_set`.
struct PlanRequest {
  const OccupancyGrid& grid;
  const ControlSet& control_set;
  const MeshTables* tables = nullptr;
  DiscreteState start;
  DiscreteState goal;
  double weight = 1.0;
};

struct SearchMetrics {
  std::size_t expansions = 0;
  std::size_t generated = 0;
  std::size_t collision_checks = 0;  // is_blocked calls
  std::chrono::nanoseconds runtime{0};
  bool solved = false;
  std::optional<double> cost;

  SearchMetrics& operator+=(const SearchMetrics& other);
};

struct PlanResult {
  std::optional<Trajectory> trajectory;
  SearchMetrics metrics;
  /// Mesh planners only: the extended cells of the solution path, start
  /// first, and the goal node's g.
  std::vector<ExtendedCell> mesh_path;
  double goal_g = 0.0;
};

/// Straight-line distance in cell units.
double euclidean_h(GridCell cell, GridCell goal);

/// Heuristic on extended cells: the lattice heuristic at initial cells,
/// otherwise the cheapest (heuristic at a member's end cell + member cost).
double mesh_h(const ExtendedCell& node, DiscreteState goal, const MeshTables& tables);

std::optional<TrajectoryViolation> validate_trajectory(const Trajectory& t, const PlanRequest& req);

/// Lattice A* with eager collision checking.
PlanResult plan_lba(const PlanRequest& req);

/// Lattice A* that checks a state's generating primitive when it is popped.
PlanResult plan_lazy_lba(const PlanRequest& req);

struct MeshOptions {
  /// Drop a popped non-initial cell when every initial cell it can complete
  /// at has already been expanded at least as cheaply.
  bool skip_expansion = true;
};

/// A* on the mesh graph of extended cells.
PlanResult plan_mesh(const PlanRequest& req, const MeshOptions& options = {});

/// MeshA* with duplicate detection on (i, j, soft id). Incomplete.
PlanResult plan_mesh_pruning(const PlanRequest& req, const MeshOptions& options = {});

/// Interleaves Mesh/PruningA* and lattice A*: `k` pruning expansions, then
/// one lattice expansion, until either search reaches its goal.
PlanResult plan_mesh_parall(const PlanRequest& req, int k = 100, const MeshOptions& options = {});

/// Uniform-cost search on the lattice with eager collision checks. Ignores
/// the weight. Independent of the planners above; used as ground truth.
std::optional<double> dijkstra_oracle(const PlanRequest& req);

enum class Algorithm { lba, lazy_lba, mesh, mesh_pruning, mesh_parall };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Dispatches to the planner for `a` (mesh_parall uses `k`).
PlanResult plan(Algorithm a, const PlanRequest& req, int k = 100);

}  // namespace meshastar
