#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meshastar/control_set.hpp"

namespace meshastar {

/// Dense number of a reachable configuration of primitives.
enum class ConfigId : std::int32_t {};

constexpr std::int32_t to_index(ConfigId id) noexcept { return static_cast<std::int32_t>(id); }
constexpr ConfigId config_id(std::int32_t index) noexcept { return static_cast<ConfigId>(index); }

enum class SuccessorKind : std::uint8_t { initial, non_initial };

/// A set of (primitive, k) pairs sharing one trace position k.
///
/// k is 1-indexed (the k-th cell of each member's collision trace, so the
/// cell is `trace[k - 1]` in storage) and satisfies k < trace_length() for
/// every member. An initial configuration has k = 1 and holds every
/// primitive leaving one heading; when a heading has no primitives its
/// initial configuration is empty and remembers the heading instead.
struct Configuration {
  int k = 1;
  std::vector<int> members;  // ascending primitive ids
  int empty_heading = -1;    // >= 0 only for an empty initial configuration

  bool empty() const noexcept { return members.empty(); }

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// All primitives leaving `heading`, each at k = 1.
Configuration init_conf(int heading, const ControlSet& cs);

/// Displacement from the k-th to the (k+1)-th trace cell (1-indexed k).
/// Throws ContractViolation unless 1 <= k < trace_length().
GridCell step_delta(const MotionPrimitive& prim, int k);

/// Successor produced by running the generation procedure directly on a
/// configuration (no tables).
struct DirectSuccessor {
  GridCell cell;
  Configuration config;
  double cost = 0.0;
  SuccessorKind kind = SuccessorKind::non_initial;
  int via_primitive = -1;  // set for initial successors only
};

/// Successor generation for the extended cell (at, config). Members at their
/// last step produce an initial successor at the primitive's final cell with
/// the primitive's cost; the rest are grouped by step into non-initial
/// successors at k + 1 with cost 0. Initial successors come first in member
/// order, then groups in order of first appearance.
std::vector<DirectSuccessor> get_successors(GridCell at, const Configuration& config,
                                            const ControlSet& cs);

struct ExtendedCell {
  int i = 0;
  int j = 0;
  ConfigId config{};

  constexpr GridCell cell() const { return {i, j}; }
  friend constexpr auto operator<=>(const ExtendedCell&, const ExtendedCell&) = default;
};

struct ExtendedCellHash {
  std::size_t operator()(const ExtendedCell& u) const noexcept {
    return DiscreteStateHash{}(DiscreteState{u.i, u.j, to_index(u.config)});
  }
};

struct SuccessorRecord {
  GridCell delta;
  ConfigId next{};
  double cost = 0.0;
  SuccessorKind kind = SuccessorKind::non_initial;
  int via_primitive = -1;

  friend bool operator==(const SuccessorRecord&, const SuccessorRecord&) = default;
};

/// Where a member primitive of a configuration finishes, relative to the
/// current cell.
struct PrimitiveEndRecord {
  GridCell end_delta;
  int end_heading = 0;
  double cost = 0.0;
  int primitive = 0;

  friend bool operator==(const PrimitiveEndRecord&, const PrimitiveEndRecord&) = default;
};

struct MeshSuccessor {
  ExtendedCell cell;
  double cost = 0.0;
  SuccessorKind kind = SuccessorKind::non_initial;
  int via_primitive = -1;

  friend bool operator==(const MeshSuccessor&, const MeshSuccessor&) = default;
};

/// Precomputed, translation-free description of the mesh graph for one
/// control set. Immutable once built; safe to share between searches.
class MeshTables {
 public:
  int config_count() const noexcept { return int(configs_.size()); }
  int heading_count() const noexcept { return int(initial_of_heading_.size()); }

  ConfigId initial_of_heading(int heading) const { return initial_of_heading_.at(std::size_t(heading)); }
  std::optional<int> heading_of_initial(ConfigId id) const {
    const int h = heading_of_initial_.at(std::size_t(to_index(id)));
    return h >= 0 ? std::optional<int>(h) : std::nullopt;
  }
  bool is_initial(ConfigId id) const { return heading_of_initial_[std::size_t(to_index(id))] >= 0; }

  std::span<const SuccessorRecord> successors(ConfigId id) const {
    const auto n = std::size_t(to_index(id));
    return {succ_records_.data() + succ_offsets_[n], succ_offsets_[n + 1] - succ_offsets_[n]};
  }
  std::span<const PrimitiveEndRecord> primitive_ends(ConfigId id) const {
    const auto n = std::size_t(to_index(id));
    return {end_records_.data() + end_offsets_[n], end_offsets_[n + 1] - end_offsets_[n]};
  }

  int soft_id(ConfigId id) const { return soft_ids_.at(std::size_t(to_index(id))); }
  int soft_class_count() const noexcept { return soft_class_count_; }

  const Configuration& configuration(ConfigId id) const { return configs_.at(std::size_t(to_index(id))); }
  std::optional<ConfigId> find(const Configuration& config) const;

  std::uint64_t control_set_hash() const noexcept { return control_set_hash_; }

  /// Versioned JSON cache representation.
  std::string to_json() const;
  /// Throws ParseError when the text is malformed or was built for a
  /// different control set.
  static MeshTables from_json(std::string_view text, const ControlSet& cs);

  friend MeshTables number_configurations(const ControlSet& cs);

  friend bool operator==(const MeshTables&, const MeshTables&) = default;

 private:
  void finish_derived_tables();

  std::vector<Configuration> configs_;
  std::vector<ConfigId> initial_of_heading_;
  std::vector<int> heading_of_initial_;
  std::vector<std::size_t> succ_offsets_{0};
  std::vector<SuccessorRecord> succ_records_;
  std::vector<std::size_t> end_offsets_{0};
  std::vector<PrimitiveEndRecord> end_records_;
  std::vector<int> soft_ids_;
  int soft_class_count_ = 0;
  std::uint64_t control_set_hash_ = 0;
};

/// Depth-first numbering of every configuration reachable from the initial
/// configurations, recording successor records, primitive-end records and
/// soft-duplicate ids. Deterministic.
MeshTables number_configurations(const ControlSet& cs);

/// Table-driven successor generation: records translated to u's cell.
std::vector<MeshSuccessor> get_successors(const ExtendedCell& u, const MeshTables& tables);

/// Projections, relative to (0,0), of mesh vertices reachable from
/// (0, 0, config) by paths of at most two edges, the vertex itself included.
/// Sorted ascending.
std::vector<GridCell> reachable_projection_set(ConfigId config, const MeshTables& tables);

/// Equal ids exactly when reachable_projection_set is equal.
int soft_id(ConfigId config, const MeshTables& tables);

/// Result of consulting a tables cache file.
struct CachedTables {
  MeshTables tables;
  bool cache_hit = false;
  std::string warning;  // set when an existing cache was unusable
};

/// Loads `cache_path` if it matches `cs`, otherwise numbers the control set
/// and writes the cache. An empty path disables caching.
CachedTables load_or_build_tables(const ControlSet& cs, const std::string& cache_path);

}  // namespace meshastar
