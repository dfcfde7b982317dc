#include "meshastar/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace meshastar {

Trajectory make_trajectory(std::vector<PrimitiveInstance> instances) {
  Trajectory t;
  std::set<GridCell> cells;
  for (const auto& inst : instances) {
    t.total_cost += inst.cost;
    cells.insert(inst.absolute_trace.begin(), inst.absolute_trace.end());
  }
  t.primitives = std::move(instances);
  t.collision_trace.assign(cells.begin(), cells.end());
  return t;
}

std::optional<TrajectoryViolation> validate_trajectory(const Trajectory& t,
                                                       const OccupancyGrid& grid,
                                                       const ControlSet& cs, DiscreteState start,
                                                       DiscreteState goal) {
  auto fail = [](TrajectoryFault f, std::string m) {
    return std::optional<TrajectoryViolation>(TrajectoryViolation{f, std::move(m)});
  };

  double cost = 0.0;
  std::set<GridCell> cells;
  for (std::size_t n = 0; n < t.primitives.size(); ++n) {
    const auto& inst = t.primitives[n];
    if (inst.template_id < 0 || std::size_t(inst.template_id) >= cs.size()) {
      return fail(TrajectoryFault::template_mismatch, "unknown primitive id");
    }
    const auto& prim = cs.primitive(inst.template_id);
    if (prim.start_heading != inst.start_state.heading) {
      return fail(TrajectoryFault::template_mismatch,
                  "instance " + std::to_string(n) + " heading does not match its template");
    }
    if (instantiate(prim, inst.start_state) != inst) {
      return fail(TrajectoryFault::template_mismatch,
                  "instance " + std::to_string(n) + " is not a translation of its template");
    }
    if (n > 0 && t.primitives[n - 1].end_state != inst.start_state) {
      return fail(TrajectoryFault::chaining,
                  "gap between instances " + std::to_string(n - 1) + " and " + std::to_string(n));
    }
    cost += inst.cost;
    cells.insert(inst.absolute_trace.begin(), inst.absolute_trace.end());
  }
  if (t.empty()) {
    if (start != goal) return fail(TrajectoryFault::endpoints, "empty trajectory but start != goal");
  } else {
    if (t.primitives.front().start_state != start) {
      return fail(TrajectoryFault::endpoints, "trajectory does not begin at the start state");
    }
    if (t.primitives.back().end_state != goal) {
      return fail(TrajectoryFault::endpoints, "trajectory does not end at the goal state");
    }
  }
  if (std::abs(cost - t.total_cost) > 1e-9 * std::max(1.0, std::abs(cost))) {
    return fail(TrajectoryFault::cost, "total_cost is not the sum of primitive costs");
  }
  if (!std::equal(cells.begin(), cells.end(), t.collision_trace.begin(), t.collision_trace.end())) {
    return fail(TrajectoryFault::trace, "collision_trace is not the union of primitive traces");
  }
  for (auto c : cells) {
    if (is_blocked(grid, c)) {
      return fail(TrajectoryFault::collision, "trajectory crosses blocked cell (" +
                                                   std::to_string(c.i) + "," +
                                                   std::to_string(c.j) + ")");
    }
  }
  return std::nullopt;
}

Trajectory reconstruct_from_mesh_path(std::span<const ExtendedCell> path,
                                      const MeshTables& tables, const ControlSet& cs) {
  if (path.empty() || !tables.is_initial(path.front().config) ||
      !tables.is_initial(path.back().config)) {
    throw InvariantFailure("mesh path must run between initial extended cells");
  }
  std::vector<PrimitiveInstance> instances;
  ExtendedCell p = path.front();
  for (std::size_t l = 1; l < path.size(); ++l) {
    const auto& u = path[l];
    if (!tables.is_initial(u.config)) continue;
    const DiscreteState s1{p.i, p.j, *tables.heading_of_initial(p.config)};
    const DiscreteState s2{u.i, u.j, *tables.heading_of_initial(u.config)};
    const GridCell offset = s2.cell() - s1.cell();
    const MotionPrimitive* found = nullptr;
    for (int id : cs.outgoing(s1.heading)) {
      const auto& prim = cs.primitive(id);
      if (prim.end_offset == offset && prim.end_heading == s2.heading) {
        found = &prim;
        break;
      }
    }
    if (found == nullptr) throw InvariantFailure("no primitive joins consecutive initial cells");
    instances.push_back(instantiate(*found, s1));
    p = u;
  }
  return make_trajectory(std::move(instances));
}

}  // namespace meshastar
