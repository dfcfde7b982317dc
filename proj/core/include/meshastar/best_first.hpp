#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

namespace meshastar {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// Node lookup backed by a hash map.
template <typename Key, typename Hash = std::hash<Key>>
class HashIndex {
 public:
  NodeId& slot(const Key& key) { return map_.try_emplace(key, kNoNode).first->second; }
  NodeId find(const Key& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? kNoNode : it->second;
  }
  void reserve(std::size_t n) { map_.reserve(n); }

 private:
  std::unordered_map<Key, NodeId, Hash> map_;
};

/// Node lookup over a dense key space; `ToIndex` maps a key to [0, size).
template <typename Key, typename ToIndex>
class DenseIndex {
 public:
  DenseIndex(std::size_t size, ToIndex to_index) : slots_(size, kNoNode), to_index_(to_index) {}
  NodeId& slot(const Key& key) { return slots_[to_index_(key)]; }
  NodeId find(const Key& key) const { return slots_[to_index_(key)]; }

 private:
  std::vector<NodeId> slots_;
  ToIndex to_index_;
};

/// Weighted best-first search bookkeeping: node arena, duplicate detection
/// and an open list ordered by f = g + w*h, then larger g, then insertion
/// order. A strictly cheaper path to a known key updates it and reopens it
/// if it was closed. The caller drives expansion.
template <typename Key, typename Data, typename Index>
class BestFirstSearch {
 public:
  struct Node {
    Key key;
    double g = 0.0;
    double h = 0.0;
    NodeId parent = kNoNode;
    bool closed = false;
    Data data;
  };

  BestFirstSearch(double weight, Index index) : weight_(weight), index_(std::move(index)) {}

  NodeId insert_start(const Key& key, double h, Data data) {
    NodeId& slot = index_.slot(key);
    slot = NodeId(nodes_.size());
    nodes_.push_back(Node{key, 0.0, h, kNoNode, false, std::move(data)});
    push(slot);
    ++generated_;
    return slot;
  }

  /// Offers a path of cost `g` to `key`. `heuristic` is evaluated only for
  /// keys seen for the first time. Returns the node id when the key was
  /// inserted or improved, kNoNode otherwise.
  template <typename Heuristic>
  NodeId offer(NodeId parent, const Key& key, double g, Heuristic&& heuristic, Data data) {
    NodeId& slot = index_.slot(key);
    if (slot == kNoNode) {
      slot = NodeId(nodes_.size());
      const double h = heuristic();
      nodes_.push_back(Node{key, g, h, parent, false, std::move(data)});
    } else {
      Node& n = nodes_[std::size_t(slot)];
      if (!(g < n.g)) return kNoNode;
      n.g = g;
      n.parent = parent;
      n.closed = false;
      n.data = std::move(data);
    }
    const NodeId id = slot;
    push(id);
    ++generated_;
    return id;
  }

  /// Removes the best open node and marks it closed; kNoNode when empty.
  NodeId pop() {
    while (!open_.empty()) {
      const Entry e = open_.top();
      open_.pop();
      Node& n = nodes_[std::size_t(e.id)];
      if (n.closed || e.g != n.g) continue;  // stale entry
      n.closed = true;
      return e.id;
    }
    return kNoNode;
  }

  bool open_empty() const noexcept { return open_.empty(); }

  Node& node(NodeId id) { return nodes_[std::size_t(id)]; }
  const Node& node(NodeId id) const { return nodes_[std::size_t(id)]; }
  NodeId find(const Key& key) const { return index_.find(key); }

  /// Node ids from the start to `id`, following parent links.
  std::vector<NodeId> path_to(NodeId id) const {
    std::vector<NodeId> path;
    for (NodeId n = id; n != kNoNode; n = nodes_[std::size_t(n)].parent) path.push_back(n);
    return {path.rbegin(), path.rend()};
  }

  std::size_t generated() const noexcept { return generated_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  double weight() const noexcept { return weight_; }

 private:
  struct Entry {
    double f;
    double g;
    std::uint64_t seq;
    NodeId id;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return a.seq > b.seq;
    }
  };

  void push(NodeId id) {
    const Node& n = nodes_[std::size_t(id)];
    open_.push(Entry{n.g + weight_ * n.h, n.g, seq_++, id});
  }

  double weight_;
  Index index_;
  std::vector<Node> nodes_;
  std::priority_queue<Entry, std::vector<Entry>, Worse> open_;
  std::uint64_t seq_ = 0;
  std::size_t generated_ = 0;
};

template <typename Key>
struct AStarResult {
  bool solved = false;
  double cost = 0.0;
  std::vector<Key> path;  // start .. goal
  std::size_t expansions = 0;
  std::size_t generated = 0;
};

/// Weighted A* over an explicit graph adapter providing
///   using Key; using KeyHash;
///   double heuristic(const Key&) const;
///   bool is_goal(const Key&) const;
///   void successors(const Key&, F emit) const;  // emit(Key, double cost)
template <typename Graph>
AStarResult<typename Graph::Key> weighted_astar(const Graph& graph,
                                                const typename Graph::Key& start, double weight) {
  using Key = typename Graph::Key;
  struct Empty {};
  BestFirstSearch<Key, Empty, HashIndex<Key, typename Graph::KeyHash>> search(weight, {});
  search.insert_start(start, graph.heuristic(start), {});

  AStarResult<Key> result;
  for (NodeId id = search.pop(); id != kNoNode; id = search.pop()) {
    ++result.expansions;
    const Key key = search.node(id).key;
    const double g = search.node(id).g;
    if (graph.is_goal(key)) {
      result.solved = true;
      result.cost = g;
      for (NodeId n : search.path_to(id)) result.path.push_back(search.node(n).key);
      break;
    }
    graph.successors(key, [&](const Key& next, double cost) {
      search.offer(id, next, g + cost, [&] { return graph.heuristic(next); }, {});
    });
  }
  result.generated = search.generated();
  return result;
}

}  // namespace meshastar
