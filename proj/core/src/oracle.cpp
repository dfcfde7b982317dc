// Uniform-cost search on the state lattice. Deliberately shares no code with
// the planners (no BestFirstSearch, no trace_is_free) so it can serve as an
// independent reference in tests.

#include <functional>
#include <map>
#include <queue>
#include <unordered_map>

#include "meshastar/search.hpp"

namespace meshastar {

std::optional<double> dijkstra_oracle(const PlanRequest& req) {
  const auto& grid = req.grid;
  const auto& cs = req.control_set;
  auto blocked = [&grid](GridCell c) {
    return c.i < 0 || c.j < 0 || c.i >= grid.width() || c.j >= grid.height() ||
           grid.blocked_unchecked(c);
  };
  if (blocked(req.start.cell()) || blocked(req.goal.cell())) return std::nullopt;

  using Item = std::pair<double, DiscreteState>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::map<DiscreteState, double> dist;
  dist[req.start] = 0.0;
  queue.push({0.0, req.start});
  while (!queue.empty()) {
    const auto [d, s] = queue.top();
    queue.pop();
    if (d > dist.at(s)) continue;
    if (s == req.goal) return d;
    for (const auto& prim : cs.primitives()) {
      if (prim.start_heading != s.heading) continue;
      bool free = true;
      for (const auto& rel : prim.trace) {
        if (blocked({s.i + rel.i, s.j + rel.j})) {
          free = false;
          break;
        }
      }
      if (!free) continue;
      const DiscreteState next{s.i + prim.end_offset.i, s.j + prim.end_offset.j, prim.end_heading};
      const double nd = d + prim.cost;
      auto it = dist.find(next);
      if (it == dist.end() || nd < it->second) {
        dist[next] = nd;
        queue.push({nd, next});
      }
    }
  }
  return std::nullopt;
}

}  // namespace meshastar
