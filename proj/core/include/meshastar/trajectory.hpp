#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshastar/best_first.hpp"
#include "meshastar/control_set.hpp"
#include "meshastar/errors.hpp"
#include "meshastar/grid_map.hpp"
#include "meshastar/mesh_graph.hpp"

namespace meshastar {

/// A chain of primitive instances. collision_trace is the sorted union of
/// the members' traces.
struct Trajectory {
  std::vector<PrimitiveInstance> primitives;
  double total_cost = 0.0;
  std::vector<GridCell> collision_trace;

  bool empty() const noexcept { return primitives.empty(); }
};

/// Fills total_cost and collision_trace from the instances.
Trajectory make_trajectory(std::vector<PrimitiveInstance> instances);

enum class TrajectoryFault { template_mismatch, chaining, endpoints, cost, trace, collision };

struct TrajectoryViolation {
  TrajectoryFault fault;
  std::string message;
};

/// Checks template consistency, chaining, endpoints, cost summation, the
/// union trace and that every trace cell is free. Returns the first problem.
std::optional<TrajectoryViolation> validate_trajectory(const Trajectory& t,
                                                       const OccupancyGrid& grid,
                                                       const ControlSet& cs, DiscreteState start,
                                                       DiscreteState goal);

/// What trajectory reconstruction needs to know about a mesh search node.
struct MeshNode {
  ExtendedCell cell;
  double g = 0.0;
  NodeId parent_initial = kNoNode;  // last initial ancestor, kNoNode for the start
  int entering_primitive = -1;      // primitive completed on entry (initial nodes only)
};

/// Walks initial ancestors from `goal` back to the start and emits the
/// primitive recorded at each, instantiated at its predecessor's state.
/// `lookup(id)` returns the MeshNode for an arena id.
template <typename NodeLookup>
Trajectory reconstruct_trajectory(NodeId goal, NodeLookup&& lookup, const MeshTables& tables,
                                  const ControlSet& cs) {
  std::vector<PrimitiveInstance> reversed;
  MeshNode current = lookup(goal);
  if (!tables.is_initial(current.cell.config)) {
    throw InvariantFailure("reconstruction must start from an initial extended cell");
  }
  while (current.parent_initial != kNoNode) {
    const MeshNode previous = lookup(current.parent_initial);
    const auto heading = tables.heading_of_initial(previous.cell.config);
    if (!heading || current.entering_primitive < 0) {
      throw InvariantFailure("broken initial-ancestor chain");
    }
    const auto& prim = cs.primitive(current.entering_primitive);
    auto inst = instantiate(prim, DiscreteState{previous.cell.i, previous.cell.j, *heading});
    if (inst.end_state.cell() != current.cell.cell() ||
        tables.initial_of_heading(inst.end_state.heading) != current.cell.config) {
      throw InvariantFailure("recorded primitive does not connect consecutive initial cells");
    }
    reversed.push_back(std::move(inst));
    current = previous;
  }
  return make_trajectory({reversed.rbegin(), reversed.rend()});
}

/// Literal reconstruction from a full mesh path: every pair of consecutive
/// initial cells is joined by the unique primitive between their states.
Trajectory reconstruct_from_mesh_path(std::span<const ExtendedCell> path,
                                      const MeshTables& tables, const ControlSet& cs);

}  // namespace meshastar
