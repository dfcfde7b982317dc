#include "meshastar/lattice.hpp"

namespace meshastar {

std::vector<LatticeEdge> lattice_successors(DiscreteState s, const ControlSet& cs) {
  std::vector<LatticeEdge> out;
  const auto ids = cs.outgoing(s.heading);
  out.reserve(ids.size());
  for (int id : ids) {
    const auto& prim = cs.primitive(id);
    out.push_back({instantiate(prim, s), prim.cost});
  }
  return out;
}

TraceCheck trace_is_free(const PrimitiveInstance& inst, const OccupancyGrid& grid) {
  TraceCheck result;
  for (auto c : inst.absolute_trace) {
    ++result.cells_checked;
    if (is_blocked(grid, c)) {
      result.free = false;
      break;
    }
  }
  return result;
}

TraceCheck trace_is_free(const MotionPrimitive& prim, GridCell origin, const OccupancyGrid& grid) {
  TraceCheck result;
  for (auto c : prim.trace) {
    ++result.cells_checked;
    if (is_blocked(grid, c + origin)) {
      result.free = false;
      break;
    }
  }
  return result;
}

}  // namespace meshastar
