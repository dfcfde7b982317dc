#include "meshastar/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>

#include "meshastar/best_first.hpp"
#include "meshastar/errors.hpp"
#include "meshastar/lattice.hpp"

namespace meshastar {

SearchMetrics& SearchMetrics::operator+=(const SearchMetrics& other) {
  expansions += other.expansions;
  generated += other.generated;
  collision_checks += other.collision_checks;
  runtime += other.runtime;
  return *this;
}

double euclidean_h(GridCell cell, GridCell goal) {
  return std::hypot(double(cell.i - goal.i), double(cell.j - goal.j));
}

double mesh_h(const ExtendedCell& node, DiscreteState goal, const MeshTables& tables) {
  const GridCell at = node.cell();
  if (tables.is_initial(node.config)) return euclidean_h(at, goal.cell());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : tables.primitive_ends(node.config)) {
    best = std::min(best, euclidean_h(at + e.end_delta, goal.cell()) + e.cost);
  }
  return best;
}

std::optional<TrajectoryViolation> validate_trajectory(const Trajectory& t, const PlanRequest& req) {
  return validate_trajectory(t, req.grid, req.control_set, req.start, req.goal);
}

namespace {

using Clock = std::chrono::steady_clock;

enum class Status { running, solved, exhausted };

void check_request(const PlanRequest& req, bool needs_tables) {
  const int k = req.control_set.heading_count();
  if (req.start.heading < 0 || req.start.heading >= k || req.goal.heading < 0 ||
      req.goal.heading >= k) {
    throw ContractViolation("start/goal heading outside the control set");
  }
  if (!(req.weight >= 1.0)) throw ContractViolation("heuristic weight must be >= 1");
  if (needs_tables) {
    if (req.tables == nullptr) throw ContractViolation("mesh planners need precomputed tables");
    if (req.tables->heading_count() != k) {
      throw ContractViolation("tables were built for a different control set");
    }
  }
}

/// Start/goal admission shared by every planner: two is_blocked calls, then
/// the start == goal shortcut.
Status admit(const PlanRequest& req, SearchMetrics& m) {
  m.collision_checks += 2;
  const bool start_blocked = is_blocked(req.grid, req.start.cell());
  const bool goal_blocked = is_blocked(req.grid, req.goal.cell());
  if (start_blocked || goal_blocked) return Status::exhausted;
  if (req.start == req.goal) return Status::solved;
  return Status::running;
}

// ---------------------------------------------------------------------------
// Lattice A* (eager collision checks)

class LatticeSearch {
 public:
  explicit LatticeSearch(const PlanRequest& req)
      : req_(req),
        search_(req.weight, Index(std::size_t(req.grid.width()) * std::size_t(req.grid.height()) *
                                      std::size_t(req.control_set.heading_count()),
                                  ToIndex{req.grid.width(), req.control_set.heading_count()})) {
    status_ = admit(req, metrics_);
    if (status_ == Status::running) {
      search_.insert_start(req.start, euclidean_h(req.start.cell(), req.goal.cell()), -1);
    }
  }

  Status status() const noexcept { return status_; }

  Status step() {
    if (status_ != Status::running) return status_;
    const NodeId id = search_.pop();
    if (id == kNoNode) return status_ = Status::exhausted;
    const DiscreteState s = search_.node(id).key;
    const double g = search_.node(id).g;
    if (s == req_.goal) {
      goal_ = id;
      return status_ = Status::solved;
    }
    ++metrics_.expansions;
    for (int pid : req_.control_set.outgoing(s.heading)) {
      const auto& prim = req_.control_set.primitive(pid);
      const auto check = trace_is_free(prim, s.cell(), req_.grid);
      metrics_.collision_checks += check.cells_checked;
      if (!check.free) continue;
      const DiscreteState next{s.i + prim.end_offset.i, s.j + prim.end_offset.j, prim.end_heading};
      search_.offer(id, next, g + prim.cost,
                    [&] { return euclidean_h(next.cell(), req_.goal.cell()); }, pid);
    }
    return status_;
  }

  SearchMetrics metrics() const {
    SearchMetrics m = metrics_;
    m.generated = search_.generated();
    return m;
  }

  Trajectory trajectory() const {
    std::vector<PrimitiveInstance> instances;
    if (goal_ != kNoNode) {
      const auto path = search_.path_to(goal_);
      for (std::size_t n = 1; n < path.size(); ++n) {
        const auto& from = search_.node(path[n - 1]);
        const auto& to = search_.node(path[n]);
        instances.push_back(instantiate(req_.control_set.primitive(to.data), from.key));
      }
    }
    return make_trajectory(std::move(instances));
  }

 private:
  struct ToIndex {
    int width;
    int headings;
    std::size_t operator()(const DiscreteState& s) const noexcept {
      return (std::size_t(s.j) * std::size_t(width) + std::size_t(s.i)) * std::size_t(headings) +
             std::size_t(s.heading);
    }
  };
  using Index = DenseIndex<DiscreteState, ToIndex>;

  const PlanRequest& req_;
  BestFirstSearch<DiscreteState, int, Index> search_;
  SearchMetrics metrics_;
  Status status_ = Status::running;
  NodeId goal_ = kNoNode;
};

// ---------------------------------------------------------------------------
// MeshA* and Mesh/PruningA*

struct MeshKey {
  int i = 0;
  int j = 0;
  std::int32_t tag = 0;  // config id, or soft id when pruning
  friend bool operator==(const MeshKey&, const MeshKey&) = default;
};

struct MeshKeyHash {
  std::size_t operator()(const MeshKey& k) const noexcept {
    return DiscreteStateHash{}(DiscreteState{k.i, k.j, k.tag});
  }
};

struct MeshData {
  ConfigId config{};
  NodeId parent_initial = kNoNode;
  int entering_primitive = -1;
};

class MeshSearch {
 public:
  MeshSearch(const PlanRequest& req, bool pruning, const MeshOptions& options)
      : req_(req),
        tables_(*req.tables),
        pruning_(pruning),
        options_(options),
        goal_config_(tables_.initial_of_heading(req.goal.heading)),
        search_(req.weight, {}) {
    status_ = admit(req, metrics_);
    if (status_ == Status::running) {
      const ConfigId start_config = tables_.initial_of_heading(req.start.heading);
      const ExtendedCell start{req.start.i, req.start.j, start_config};
      search_.insert_start(key_of(start), mesh_h(start, req.goal, tables_),
                           MeshData{start_config, kNoNode, -1});
    }
  }

  Status status() const noexcept { return status_; }

  Status step() {
    while (status_ == Status::running) {
      const NodeId id = search_.pop();
      if (id == kNoNode) return status_ = Status::exhausted;
      const auto node = search_.node(id);
      const ConfigId config = node.data.config;
      const GridCell at{node.key.i, node.key.j};
      if (at == req_.goal.cell() && config == goal_config_) {
        goal_ = id;
        return status_ = Status::solved;
      }
      const bool initial = tables_.is_initial(config);
      if (!initial && options_.skip_expansion && completions_done(at, config, node.g)) continue;

      ++metrics_.expansions;
      if (initial) mark_initial_expanded(at, *tables_.heading_of_initial(config), node.g);
      const NodeId parent_initial = initial ? id : node.data.parent_initial;
      for (const auto& r : tables_.successors(config)) {
        const GridCell cell = at + r.delta;
        ++metrics_.collision_checks;
        if (is_blocked(req_.grid, cell)) continue;
        const ExtendedCell next{cell.i, cell.j, r.next};
        search_.offer(id, key_of(next), node.g + r.cost,
                      [&] { return mesh_h(next, req_.goal, tables_); },
                      MeshData{r.next, parent_initial, r.via_primitive});
      }
      return status_;
    }
    return status_;
  }

  SearchMetrics metrics() const {
    SearchMetrics m = metrics_;
    m.generated = search_.generated();
    return m;
  }

  double goal_g() const { return goal_ == kNoNode ? 0.0 : search_.node(goal_).g; }

  Trajectory trajectory() const {
    if (goal_ == kNoNode) return make_trajectory({});
    auto lookup = [this](NodeId id) {
      const auto& n = search_.node(id);
      return MeshNode{{n.key.i, n.key.j, n.data.config}, n.g, n.data.parent_initial,
                      n.data.entering_primitive};
    };
    return reconstruct_trajectory(goal_, lookup, tables_, req_.control_set);
  }

  std::vector<ExtendedCell> mesh_path() const {
    std::vector<ExtendedCell> path;
    if (goal_ == kNoNode) return path;
    for (NodeId id : search_.path_to(goal_)) {
      const auto& n = search_.node(id);
      path.push_back({n.key.i, n.key.j, n.data.config});
    }
    return path;
  }

 private:
  MeshKey key_of(const ExtendedCell& u) const {
    return {u.i, u.j, pruning_ ? tables_.soft_id(u.config) : to_index(u.config)};
  }

  void mark_initial_expanded(GridCell at, int heading, double g) {
    auto [it, inserted] = expanded_initial_.try_emplace(DiscreteState{at.i, at.j, heading}, g);
    if (!inserted) it->second = std::min(it->second, g);
  }

  bool completions_done(GridCell at, ConfigId config, double g) const {
    for (const auto& e : tables_.primitive_ends(config)) {
      const GridCell end = at + e.end_delta;
      auto it = expanded_initial_.find(DiscreteState{end.i, end.j, e.end_heading});
      if (it == expanded_initial_.end() || it->second > g + e.cost) return false;
    }
    return true;
  }

  const PlanRequest& req_;
  const MeshTables& tables_;
  bool pruning_;
  MeshOptions options_;
  ConfigId goal_config_;
  BestFirstSearch<MeshKey, MeshData, HashIndex<MeshKey, MeshKeyHash>> search_;
  std::unordered_map<DiscreteState, double, DiscreteStateHash> expanded_initial_;
  SearchMetrics metrics_;
  Status status_ = Status::running;
  NodeId goal_ = kNoNode;
};

template <typename Search>
PlanResult finish(const Search& search, Clock::time_point started) {
  PlanResult result;
  result.metrics = search.metrics();
  if (search.status() == Status::solved) {
    result.trajectory = search.trajectory();
    result.metrics.solved = true;
    result.metrics.cost = result.trajectory->total_cost;
  }
  result.metrics.runtime = Clock::now() - started;
  return result;
}

PlanResult run_mesh(const PlanRequest& req, bool pruning, const MeshOptions& options) {
  const auto started = Clock::now();
  check_request(req, true);
  MeshSearch search(req, pruning, options);
  while (search.step() == Status::running) {
  }
  PlanResult result = finish(search, started);
  if (result.metrics.solved) {
    result.mesh_path = search.mesh_path();
    if (result.mesh_path.empty()) {
      result.mesh_path.push_back(
          {req.start.i, req.start.j, req.tables->initial_of_heading(req.start.heading)});
    }
    result.goal_g = search.goal_g();
  }
  result.metrics.runtime = Clock::now() - started;
  return result;
}

}  // namespace

PlanResult plan_lba(const PlanRequest& req) {
  const auto started = Clock::now();
  check_request(req, false);
  LatticeSearch search(req);
  while (search.step() == Status::running) {
  }
  return finish(search, started);
}

PlanResult plan_lazy_lba(const PlanRequest& req) {
  const auto started = Clock::now();
  check_request(req, false);
  const auto& cs = req.control_set;
  const auto& grid = req.grid;

  PlanResult result;
  SearchMetrics& m = result.metrics;
  const Status admitted = admit(req, m);
  if (admitted != Status::running) {
    if (admitted == Status::solved) {
      result.trajectory = make_trajectory({});
      m.solved = true;
      m.cost = 0.0;
    }
    m.runtime = Clock::now() - started;
    return result;
  }

  // Open entries are edges: a state may be queued once per generating edge,
  // because the cheapest one can turn out to collide when popped.
  struct Entry {
    double f;
    double g;
    std::uint64_t seq;
    DiscreteState state;
    std::int32_t parent;  // index into `closed_nodes`, -1 for the start
    int primitive;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return a.seq > b.seq;
    }
  };
  struct ClosedNode {
    DiscreteState state;
    std::int32_t parent;
    int primitive;
  };

  const std::size_t headings = std::size_t(cs.heading_count());
  auto index_of = [&](const DiscreteState& s) {
    return (std::size_t(s.j) * std::size_t(grid.width()) + std::size_t(s.i)) * headings +
           std::size_t(s.heading);
  };
  std::vector<std::uint8_t> closed(std::size_t(grid.width()) * std::size_t(grid.height()) * headings, 0);
  std::vector<ClosedNode> closed_nodes;
  std::priority_queue<Entry, std::vector<Entry>, Worse> open;
  std::uint64_t seq = 0;
  const double w = req.weight;

  open.push({w * euclidean_h(req.start.cell(), req.goal.cell()), 0.0, seq++, req.start, -1, -1});
  ++m.generated;

  std::int32_t goal_node = -1;
  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    const std::size_t idx = index_of(e.state);
    if (closed[idx]) continue;
    if (e.primitive >= 0) {
      const auto check = trace_is_free(cs.primitive(e.primitive),
                                       closed_nodes[std::size_t(e.parent)].state.cell(), grid);
      m.collision_checks += check.cells_checked;
      if (!check.free) {
        ++m.expansions;  // popped and discarded
        continue;
      }
    }
    closed[idx] = 1;
    const auto self = std::int32_t(closed_nodes.size());
    closed_nodes.push_back({e.state, e.parent, e.primitive});
    if (e.state == req.goal) {
      goal_node = self;
      m.solved = true;
      m.cost = e.g;
      break;
    }
    ++m.expansions;
    for (int pid : cs.outgoing(e.state.heading)) {
      const auto& prim = cs.primitive(pid);
      const DiscreteState next{e.state.i + prim.end_offset.i, e.state.j + prim.end_offset.j,
                               prim.end_heading};
      if (!grid.in_bounds(next.cell()) || closed[index_of(next)]) continue;
      const double g = e.g + prim.cost;
      open.push({g + w * euclidean_h(next.cell(), req.goal.cell()), g, seq++, next, self, pid});
      ++m.generated;
    }
  }

  if (goal_node >= 0) {
    std::vector<PrimitiveInstance> reversed;
    for (std::int32_t n = goal_node; closed_nodes[std::size_t(n)].parent >= 0;
         n = closed_nodes[std::size_t(n)].parent) {
      const auto& node = closed_nodes[std::size_t(n)];
      reversed.push_back(instantiate(cs.primitive(node.primitive),
                                     closed_nodes[std::size_t(node.parent)].state));
    }
    result.trajectory = make_trajectory({reversed.rbegin(), reversed.rend()});
    m.cost = result.trajectory->total_cost;
  }
  m.runtime = Clock::now() - started;
  return result;
}

PlanResult plan_mesh(const PlanRequest& req, const MeshOptions& options) {
  return run_mesh(req, false, options);
}

PlanResult plan_mesh_pruning(const PlanRequest& req, const MeshOptions& options) {
  return run_mesh(req, true, options);
}

PlanResult plan_mesh_parall(const PlanRequest& req, int k, const MeshOptions& options) {
  const auto started = Clock::now();
  if (k <= 0) throw ContractViolation("K must be positive");
  check_request(req, true);
  MeshSearch pruning(req, true, options);
  LatticeSearch lattice(req);

  PlanResult result;
  auto take = [&](const auto& search) {
    result.trajectory = search.trajectory();
    result.metrics.solved = true;
    result.metrics.cost = result.trajectory->total_cost;
  };
  // Pruning search first in each round; ties between the two go to it.
  while (true) {
    for (int n = 0; n < k && pruning.status() == Status::running; ++n) pruning.step();
    if (pruning.status() == Status::solved) {
      take(pruning);
      break;
    }
    lattice.step();
    if (lattice.status() == Status::solved) {
      take(lattice);
      break;
    }
    if (pruning.status() == Status::exhausted && lattice.status() == Status::exhausted) break;
  }
  const bool solved = result.metrics.solved;
  const auto cost = result.metrics.cost;
  result.metrics = pruning.metrics();
  result.metrics += lattice.metrics();
  // Both searches admit the start and goal; report that pair of checks once.
  result.metrics.collision_checks -= 2;
  result.metrics.solved = solved;
  result.metrics.cost = cost;
  result.metrics.runtime = Clock::now() - started;
  return result;
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::lba: return "lba";
    case Algorithm::lazy_lba: return "lazy_lba";
    case Algorithm::mesh: return "mesh";
    case Algorithm::mesh_pruning: return "mesh_pruning";
    case Algorithm::mesh_parall: return "mesh_parall";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::lba, Algorithm::lazy_lba, Algorithm::mesh, Algorithm::mesh_pruning,
                 Algorithm::mesh_parall}) {
    if (name == algorithm_name(a)) return a;
  }
  return std::nullopt;
}

PlanResult plan(Algorithm a, const PlanRequest& req, int k) {
  switch (a) {
    case Algorithm::lba: return plan_lba(req);
    case Algorithm::lazy_lba: return plan_lazy_lba(req);
    case Algorithm::mesh: return plan_mesh(req);
    case Algorithm::mesh_pruning: return plan_mesh_pruning(req);
    case Algorithm::mesh_parall: return plan_mesh_parall(req, k);
  }
  throw ContractViolation("unknown algorithm");
}

}  // namespace meshastar
