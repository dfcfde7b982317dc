#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meshastar/geometry.hpp"

namespace meshastar {

/// A motion template. Instantiating it at a state translates the trace.
///
/// Trace positions are stored 0-indexed. Where the mesh-graph code speaks of
/// the "k-th trace cell" it uses 1-indexed positions: k = index + 1.
struct MotionPrimitive {
  int id = 0;
  int start_heading = 0;
  int end_heading = 0;
  GridCell end_offset;
  std::vector<GridCell> trace;  // trace.front() == (0,0), trace.back() == end_offset
  double cost = 0.0;

  /// Number of cells in the collision trace.
  int trace_length() const noexcept { return int(trace.size()); }

  friend bool operator==(const MotionPrimitive&, const MotionPrimitive&) = default;
};

/// Canonical set of motion primitives with a per-heading index.
/// Construction does not validate; call validate() or load_control_set().
class ControlSet {
 public:
  ControlSet() = default;
  ControlSet(int heading_count, std::vector<double> headings_degrees,
             std::vector<MotionPrimitive> primitives);

  int heading_count() const noexcept { return heading_count_; }
  const std::vector<double>& headings_degrees() const noexcept { return headings_degrees_; }
  const std::vector<MotionPrimitive>& primitives() const noexcept { return primitives_; }
  const MotionPrimitive& primitive(int id) const { return primitives_.at(std::size_t(id)); }
  std::size_t size() const noexcept { return primitives_.size(); }

  /// Ids of primitives starting at `heading`, ascending. Empty for unknown headings.
  std::span<const int> outgoing(int heading) const noexcept;

  friend bool operator==(const ControlSet& a, const ControlSet& b) {
    return a.heading_count_ == b.heading_count_ && a.headings_degrees_ == b.headings_degrees_ &&
           a.primitives_ == b.primitives_;
  }

 private:
  int heading_count_ = 0;
  std::vector<double> headings_degrees_;
  std::vector<MotionPrimitive> primitives_;
  std::vector<std::vector<int>> by_heading_;
};

struct Violation {
  int primitive_id = -1;  // -1 for set-level problems
  std::string message;
};

std::vector<Violation> validate(const ControlSet& cs);

/// Parses the JSON control-set schema and validates it. Throws ParseError
/// with a field path on schema or invariant violations.
ControlSet load_control_set(std::string_view json_text);
/// Schema-level parsing only (types, field presence, heading ranges, positive
/// costs); the set-level invariants are left to validate().
ControlSet parse_control_set(std::string_view json_text);
std::string save_control_set(const ControlSet& cs);

/// The two-heading set used throughout the tests: headings E (0) and N (1).
ControlSet make_toy2();

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Supercover rasterization of a polyline (cell (i, j) spans [i, i+1) x [j, j+1)).
/// Returns every cell the polyline touches in traversal order with consecutive
/// duplicates removed. When the line passes exactly through a cell corner both
/// side cells are included. Throws ContractViolation for fewer than two points.
std::vector<GridCell> rasterize(std::span<const Point2> polyline);

struct ArcGeneratorParams {
  int heading_count = 8;
  /// Straight primitives per heading, in lattice steps along the heading's
  /// base direction vector (1 step = (1,0) on axes, (1,1) on diagonals, ...).
  std::vector<int> straight_lengths = {1};
  /// Minimum turning radii in cells. Each radius yields left and right turns
  /// for every entry of `turn_steps`.
  std::vector<double> arc_radii;
  /// Heading changes (in discrete heading steps) generated per radius.
  std::vector<int> turn_steps = {1};
  double cell_size = 1.0;
};

/// Deterministic car-like control set. Turns are a straight run followed by a
/// circular arc, solved so the endpoint is exactly a cell center and the end
/// tangent is exactly the target heading. Cost = path length * cell_size.
ControlSet generate_arcs(const ArcGeneratorParams& params);

/// Centerline of a generated primitive, sampled in cell units relative to the
/// start cell center. Empty when the primitive was not produced by
/// generate_arcs for this parameter set.
std::vector<Point2> primitive_centerline(const ControlSet& cs, int primitive_id,
                                         double spacing = 0.05);

/// 16 headings, 24 primitives per heading.
ArcGeneratorParams full_scale_params();
/// 8 headings, small arcs: quick to search on 32x32 grids.
ArcGeneratorParams desk_scale_params();

struct PrimitiveInstance {
  int template_id = 0;
  DiscreteState start_state;
  DiscreteState end_state;
  std::vector<GridCell> absolute_trace;
  double cost = 0.0;

  friend bool operator==(const PrimitiveInstance&, const PrimitiveInstance&) = default;
};

/// Throws ContractViolation when `at.heading != prim.start_heading`.
PrimitiveInstance instantiate(const MotionPrimitive& prim, DiscreteState at);

/// 64-bit FNV-1a over the canonical saved form.
std::uint64_t content_hash(const ControlSet& cs);

}  // namespace meshastar
