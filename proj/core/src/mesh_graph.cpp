#include "meshastar/mesh_graph.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "meshastar/errors.hpp"
#include "meshastar/grid_map.hpp"

namespace meshastar {

Configuration init_conf(int heading, const ControlSet& cs) {
  Configuration conf;
  conf.k = 1;
  const auto ids = cs.outgoing(heading);
  conf.members.assign(ids.begin(), ids.end());
  if (conf.members.empty()) conf.empty_heading = heading;
  return conf;
}

GridCell step_delta(const MotionPrimitive& prim, int k) {
  if (k < 1 || k >= prim.trace_length()) {
    throw ContractViolation("step index " + std::to_string(k) + " outside [1, " +
                            std::to_string(prim.trace_length()) + ") for primitive " +
                            std::to_string(prim.id));
  }
  // 1-indexed cells k and k+1 live at storage positions k-1 and k.
  return prim.trace[std::size_t(k)] - prim.trace[std::size_t(k - 1)];
}

std::vector<DirectSuccessor> get_successors(GridCell at, const Configuration& config,
                                            const ControlSet& cs) {
  std::vector<DirectSuccessor> initial;
  std::vector<std::pair<GridCell, Configuration>> groups;  // insertion-ordered
  for (int id : config.members) {
    const auto& prim = cs.primitive(id);
    const GridCell delta = step_delta(prim, config.k);
    if (config.k == prim.trace_length() - 1) {
      DirectSuccessor s;
      s.cell = at + delta;
      s.config = init_conf(prim.end_heading, cs);
      s.cost = prim.cost;
      s.kind = SuccessorKind::initial;
      s.via_primitive = id;
      initial.push_back(std::move(s));
      continue;
    }
    auto it = std::find_if(groups.begin(), groups.end(),
                           [delta](const auto& g) { return g.first == delta; });
    if (it == groups.end()) {
      Configuration next;
      next.k = config.k + 1;
      next.members = {id};
      groups.emplace_back(delta, std::move(next));
    } else {
      it->second.members.push_back(id);
    }
  }
  std::vector<DirectSuccessor> out = std::move(initial);
  for (auto& [delta, conf] : groups) {
    DirectSuccessor s;
    s.cell = at + delta;
    s.config = std::move(conf);
    s.cost = 0.0;
    s.kind = SuccessorKind::non_initial;
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<ConfigId> MeshTables::find(const Configuration& config) const {
  auto it = std::find(configs_.begin(), configs_.end(), config);
  if (it == configs_.end()) return std::nullopt;
  return config_id(std::int32_t(it - configs_.begin()));
}

MeshTables number_configurations(const ControlSet& cs) {
  MeshTables t;
  t.control_set_hash_ = content_hash(cs);

  std::map<Configuration, ConfigId> numbers;
  std::vector<std::vector<DirectSuccessor>> direct;  // per config, at (0,0)

  auto number = [&](const Configuration& conf) {
    const auto id = config_id(std::int32_t(t.configs_.size()));
    numbers.emplace(conf, id);
    t.configs_.push_back(conf);
    direct.push_back(get_successors(GridCell{0, 0}, conf, cs));
    return id;
  };

  struct Frame {
    ConfigId id;
    std::size_t next = 0;
  };
  for (int h = 0; h < cs.heading_count(); ++h) {
    const auto root = init_conf(h, cs);
    if (numbers.contains(root)) continue;
    std::vector<Frame> stack{{number(root)}};
    while (!stack.empty()) {
      auto& top = stack.back();
      const auto& succs = direct[std::size_t(to_index(top.id))];
      if (top.next == succs.size()) {
        stack.pop_back();
        continue;
      }
      const auto& child = succs[top.next++].config;
      if (!numbers.contains(child)) stack.push_back({number(child)});
    }
  }

  t.initial_of_heading_.resize(std::size_t(cs.heading_count()));
  t.heading_of_initial_.assign(t.configs_.size(), -1);
  for (int h = 0; h < cs.heading_count(); ++h) {
    const auto id = numbers.at(init_conf(h, cs));
    t.initial_of_heading_[std::size_t(h)] = id;
    t.heading_of_initial_[std::size_t(to_index(id))] = h;
  }

  for (std::size_t n = 0; n < t.configs_.size(); ++n) {
    for (const auto& s : direct[n]) {
      t.succ_records_.push_back(
          {s.cell, numbers.at(s.config), s.cost, s.kind, s.via_primitive});
    }
    t.succ_offsets_.push_back(t.succ_records_.size());

    const auto& conf = t.configs_[n];
    for (int id : conf.members) {
      const auto& prim = cs.primitive(id);
      t.end_records_.push_back({prim.trace.back() - prim.trace[std::size_t(conf.k - 1)],
                                prim.end_heading, prim.cost, id});
    }
    t.end_offsets_.push_back(t.end_records_.size());
  }
  t.finish_derived_tables();
  return t;
}

void MeshTables::finish_derived_tables() {
  std::map<std::vector<GridCell>, int> classes;
  soft_ids_.clear();
  for (std::int32_t n = 0; n < config_count(); ++n) {
    auto set = reachable_projection_set(config_id(n), *this);
    auto [it, inserted] = classes.emplace(std::move(set), int(classes.size()));
    soft_ids_.push_back(it->second);
  }
  soft_class_count_ = int(classes.size());
}

std::vector<MeshSuccessor> get_successors(const ExtendedCell& u, const MeshTables& tables) {
  std::vector<MeshSuccessor> out;
  const auto records = tables.successors(u.config);
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({{u.i + r.delta.i, u.j + r.delta.j, r.next}, r.cost, r.kind, r.via_primitive});
  }
  return out;
}

std::vector<GridCell> reachable_projection_set(ConfigId config, const MeshTables& tables) {
  std::set<GridCell> cells{{0, 0}};
  for (const auto& first : tables.successors(config)) {
    cells.insert(first.delta);
    for (const auto& second : tables.successors(first.next)) {
      cells.insert(first.delta + second.delta);
    }
  }
  return {cells.begin(), cells.end()};
}

int soft_id(ConfigId config, const MeshTables& tables) { return tables.soft_id(config); }

namespace {

constexpr const char* kFormat = "meshastar-tables";
constexpr int kVersion = 1;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string MeshTables::to_json() const {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["control_set_hash"] = hex64(control_set_hash_);
  doc["config_count"] = config_count();
  auto initial = ordered_json::array();
  for (auto id : initial_of_heading_) initial.push_back(to_index(id));
  doc["initial_of_heading"] = std::move(initial);

  auto configs = ordered_json::array();
  auto succs = ordered_json::array();
  auto ends = ordered_json::array();
  for (std::int32_t n = 0; n < config_count(); ++n) {
    const auto& c = configs_[std::size_t(n)];
    configs.push_back({{"k", c.k}, {"members", c.members}, {"empty_heading", c.empty_heading}});
    auto rs = ordered_json::array();
    for (const auto& r : successors(config_id(n))) {
      rs.push_back({r.delta.i, r.delta.j, to_index(r.next), r.cost,
                    r.kind == SuccessorKind::initial ? 1 : 0, r.via_primitive});
    }
    succs.push_back(std::move(rs));
    auto es = ordered_json::array();
    for (const auto& e : primitive_ends(config_id(n))) {
      es.push_back({e.end_delta.i, e.end_delta.j, e.end_heading, e.cost, e.primitive});
    }
    ends.push_back(std::move(es));
  }
  doc["configs"] = std::move(configs);
  doc["successors"] = std::move(succs);
  doc["primitive_ends"] = std::move(ends);
  doc["soft_ids"] = soft_ids_;
  return doc.dump() + "\n";
}

MeshTables MeshTables::from_json(std::string_view text, const ControlSet& cs) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("invalid tables cache: ") + e.what());
  }
  MeshTables t;
  try {
    if (doc.at("format") != kFormat) throw ParseError("format", "not a tables cache");
    if (doc.at("version") != kVersion) throw ParseError("version", "unsupported cache version");
    const auto expected = hex64(content_hash(cs));
    if (doc.at("control_set_hash").get<std::string>() != expected) {
      throw ParseError("control_set_hash", "cache was built for a different control set");
    }
    const int count = doc.at("config_count").get<int>();
    const auto& configs = doc.at("configs");
    const auto& succs = doc.at("successors");
    const auto& ends = doc.at("primitive_ends");
    const auto& soft = doc.at("soft_ids");
    if (count <= 0 || configs.size() != std::size_t(count) || succs.size() != std::size_t(count) ||
        ends.size() != std::size_t(count) || soft.size() != std::size_t(count)) {
      throw ParseError("config_count", "table sizes disagree");
    }
    auto check_config = [count](int v, const char* where) {
      if (v < 0 || v >= count) throw ParseError(where, "config id out of range");
      return config_id(v);
    };
    auto check_primitive = [&cs](int v, const char* where) {
      if (v < 0 || std::size_t(v) >= cs.size()) throw ParseError(where, "primitive id out of range");
      return v;
    };
    t.control_set_hash_ = content_hash(cs);
    for (const auto& c : configs) {
      Configuration conf;
      conf.k = c.at("k").get<int>();
      conf.members = c.at("members").get<std::vector<int>>();
      conf.empty_heading = c.at("empty_heading").get<int>();
      for (int m : conf.members) check_primitive(m, "configs.members");
      t.configs_.push_back(std::move(conf));
    }
    const auto& initial = doc.at("initial_of_heading");
    if (initial.size() != std::size_t(cs.heading_count())) {
      throw ParseError("initial_of_heading", "wrong heading count");
    }
    t.heading_of_initial_.assign(std::size_t(count), -1);
    for (std::size_t h = 0; h < initial.size(); ++h) {
      const auto id = check_config(initial[h].get<int>(), "initial_of_heading");
      t.initial_of_heading_.push_back(id);
      t.heading_of_initial_[std::size_t(to_index(id))] = int(h);
    }
    for (const auto& rs : succs) {
      for (const auto& r : rs) {
        SuccessorRecord rec;
        rec.delta = {r.at(0).get<int>(), r.at(1).get<int>()};
        rec.next = check_config(r.at(2).get<int>(), "successors");
        rec.cost = r.at(3).get<double>();
        rec.kind = r.at(4).get<int>() == 1 ? SuccessorKind::initial : SuccessorKind::non_initial;
        rec.via_primitive = r.at(5).get<int>();
        if (rec.kind == SuccessorKind::initial) check_primitive(rec.via_primitive, "successors");
        t.succ_records_.push_back(rec);
      }
      t.succ_offsets_.push_back(t.succ_records_.size());
    }
    for (const auto& es : ends) {
      for (const auto& e : es) {
        t.end_records_.push_back({{e.at(0).get<int>(), e.at(1).get<int>()},
                                  e.at(2).get<int>(),
                                  e.at(3).get<double>(),
                                  check_primitive(e.at(4).get<int>(), "primitive_ends")});
      }
      t.end_offsets_.push_back(t.end_records_.size());
    }
    t.soft_ids_ = soft.get<std::vector<int>>();
    t.soft_class_count_ =
        t.soft_ids_.empty() ? 0 : *std::max_element(t.soft_ids_.begin(), t.soft_ids_.end()) + 1;
  } catch (const json::exception& e) {
    throw ParseError("", std::string("malformed tables cache: ") + e.what());
  }
  return t;
}

CachedTables load_or_build_tables(const ControlSet& cs, const std::string& cache_path) {
  CachedTables result;
  if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
    try {
      result.tables = MeshTables::from_json(read_text_file(cache_path), cs);
      result.cache_hit = true;
      return result;
    } catch (const std::exception& e) {
      result.warning = "ignoring tables cache '" + cache_path + "': " + e.what();
    }
  }
  result.tables = number_configurations(cs);
  if (!cache_path.empty()) write_text_file(cache_path, result.tables.to_json());
  return result;
}

}  // namespace meshastar
