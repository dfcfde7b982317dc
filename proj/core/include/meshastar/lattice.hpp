#pragma once

#include <cstddef>
#include <vector>

#include "meshastar/control_set.hpp"
#include "meshastar/grid_map.hpp"

namespace meshastar {

struct LatticeEdge {
  PrimitiveInstance instance;
  double cost = 0.0;
};

/// One edge per primitive starting at `s.heading`, instantiated at `s`.
/// No collision filtering.
std::vector<LatticeEdge> lattice_successors(DiscreteState s, const ControlSet& cs);

struct TraceCheck {
  bool free = true;
  std::size_t cells_checked = 0;
};

/// Walks the trace in order and stops at the first blocked cell.
TraceCheck trace_is_free(const PrimitiveInstance& inst, const OccupancyGrid& grid);

/// Same check for a template placed at `origin`, without building an instance.
TraceCheck trace_is_free(const MotionPrimitive& prim, GridCell origin, const OccupancyGrid& grid);

}  // namespace meshastar
