#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "meshastar/errors.hpp"
#include "meshastar/mesh_graph.hpp"
#include "meshastar/synthetic.hpp"

namespace meshastar {
namespace {

constexpr int E = 0;
constexpr int N = 1;

Configuration conf(int k, std::vector<int> members) { return {k, std::move(members), -1}; }

class Toy2Mesh : public ::testing::Test {
 protected:
  ControlSet cs = make_toy2();
  MeshTables tables = number_configurations(cs);

  ConfigId id(const Configuration& c) const {
    auto found = tables.find(c);
    EXPECT_TRUE(found.has_value());
    return found.value_or(ConfigId{});
  }
};

TEST_F(Toy2Mesh, InitialConfigurations) {
  EXPECT_EQ(init_conf(E, cs), conf(1, {0, 1}));
  EXPECT_EQ(init_conf(N, cs), conf(1, {2, 3}));
  ControlSet three(3, {0, 90, 180}, cs.primitives());
  const auto empty = init_conf(2, three);
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(empty.empty_heading, 2);
}

TEST_F(Toy2Mesh, StepDelta) {
  EXPECT_EQ(step_delta(cs.primitive(0), 1), (GridCell{1, 0}));
  EXPECT_EQ(step_delta(cs.primitive(1), 2), (GridCell{0, 1}));
  EXPECT_THROW(step_delta(cs.primitive(0), 3), ContractViolation);
  EXPECT_THROW(step_delta(cs.primitive(0), 0), ContractViolation);
}

TEST_F(Toy2Mesh, DirectSuccessorsFromInitialEast) {
  const auto succ = get_successors({5, 5}, init_conf(E, cs), cs);
  ASSERT_EQ(succ.size(), 1U);
  EXPECT_EQ(succ[0].cell, (GridCell{6, 5}));
  EXPECT_EQ(succ[0].config, conf(2, {0, 1}));
  EXPECT_EQ(succ[0].cost, 0.0);
  EXPECT_EQ(succ[0].kind, SuccessorKind::non_initial);
}

TEST_F(Toy2Mesh, DirectSuccessorsCompletingPrimitives) {
  const auto succ = get_successors({6, 5}, conf(2, {0, 1}), cs);
  ASSERT_EQ(succ.size(), 2U);
  EXPECT_EQ(succ[0].cell, (GridCell{7, 5}));
  EXPECT_EQ(succ[0].config, init_conf(E, cs));
  EXPECT_EQ(succ[0].cost, 2.0);
  EXPECT_EQ(succ[0].kind, SuccessorKind::initial);
  EXPECT_EQ(succ[0].via_primitive, 0);
  EXPECT_EQ(succ[1].cell, (GridCell{6, 6}));
  EXPECT_EQ(succ[1].config, init_conf(N, cs));
  EXPECT_EQ(succ[1].cost, 2.2);
  EXPECT_EQ(succ[1].via_primitive, 1);
}

TEST_F(Toy2Mesh, DirectSuccessorsFromInitialNorth) {
  const auto succ = get_successors({0, 0}, init_conf(N, cs), cs);
  ASSERT_EQ(succ.size(), 1U);
  EXPECT_EQ(succ[0].cell, (GridCell{0, 1}));
  EXPECT_EQ(succ[0].config, conf(2, {2, 3}));
  EXPECT_EQ(succ[0].cost, 0.0);
}

TEST_F(Toy2Mesh, FourConfigurations) {
  EXPECT_EQ(tables.config_count(), 4);
  id(init_conf(E, cs));
  id(init_conf(N, cs));
  id(conf(2, {0, 1}));
  id(conf(2, {2, 3}));
  EXPECT_EQ(tables.initial_of_heading(E), id(init_conf(E, cs)));
  EXPECT_EQ(tables.heading_of_initial(id(init_conf(N, cs))), N);
  EXPECT_FALSE(tables.heading_of_initial(id(conf(2, {2, 3}))).has_value());
}

TEST_F(Toy2Mesh, TableSuccessorsTranslate) {
  const ExtendedCell u{6, 5, id(conf(2, {0, 1}))};
  const auto succ = get_successors(u, tables);
  ASSERT_EQ(succ.size(), 2U);
  EXPECT_EQ(succ[0].cell, (ExtendedCell{7, 5, tables.initial_of_heading(E)}));
  EXPECT_EQ(succ[1].cell, (ExtendedCell{6, 6, tables.initial_of_heading(N)}));
  const auto shifted = get_successors(ExtendedCell{-3, 11, u.config}, tables);
  for (std::size_t n = 0; n < succ.size(); ++n) {
    EXPECT_EQ(shifted[n].cell.i, succ[n].cell.i - 9);
    EXPECT_EQ(shifted[n].cell.j, succ[n].cell.j + 6);
    EXPECT_EQ(shifted[n].cost, succ[n].cost);
  }
}

TEST_F(Toy2Mesh, ProjectionSets) {
  EXPECT_EQ(reachable_projection_set(id(conf(2, {0, 1})), tables),
            (std::vector<GridCell>{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {2, 0}}));
  EXPECT_EQ(reachable_projection_set(tables.initial_of_heading(E), tables),
            (std::vector<GridCell>{{0, 0}, {1, 0}, {1, 1}, {2, 0}}));
  // The north-bound middle configuration reaches the mirror image of the
  // east-bound one, and that set is symmetric, so the two are soft duplicates.
  EXPECT_EQ(reachable_projection_set(id(conf(2, {2, 3})), tables),
            reachable_projection_set(id(conf(2, {0, 1})), tables));
  EXPECT_EQ(soft_id(id(conf(2, {0, 1})), tables), soft_id(id(conf(2, {2, 3})), tables));
  EXPECT_NE(soft_id(id(conf(2, {0, 1})), tables), soft_id(tables.initial_of_heading(E), tables));
  for (int c = 0; c < tables.config_count(); ++c) {
    EXPECT_EQ(soft_id(config_id(c), tables), tables.soft_id(config_id(c)));
  }
}

TEST(MeshGraph, EmptyHeadingGetsASinkConfiguration) {
  ControlSet cs(3, {0, 90, 180}, make_toy2().primitives());
  const auto tables = number_configurations(cs);
  EXPECT_EQ(tables.config_count(), 5);
  const auto sink = tables.initial_of_heading(2);
  EXPECT_TRUE(tables.successors(sink).empty());
  EXPECT_EQ(tables.heading_of_initial(sink), 2);
  EXPECT_EQ(reachable_projection_set(sink, tables), (std::vector<GridCell>{{0, 0}}));
}

TEST(MeshGraph, SingleShortPrimitive) {
  ControlSet cs(1, {0}, {{0, 0, 0, {1, 0}, {{0, 0}, {1, 0}}, 1.0}});
  const auto tables = number_configurations(cs);
  EXPECT_EQ(tables.config_count(), 1);
  const auto succ = tables.successors(tables.initial_of_heading(0));
  ASSERT_EQ(succ.size(), 1U);
  EXPECT_EQ(succ[0].kind, SuccessorKind::initial);
  EXPECT_EQ(succ[0].delta, (GridCell{1, 0}));
}

// Two headings whose only primitives share a trace and an end state have
// different configurations but the same reachable projections.
TEST(MeshGraph, EqualProjectionSetsShareSoftId) {
  ControlSet cs(2, {0, 90},
                {{0, 0, 0, {1, 0}, {{0, 0}, {1, 0}}, 1.0}, {1, 1, 0, {1, 0}, {{0, 0}, {1, 0}}, 1.5}});
  const auto tables = number_configurations(cs);
  const auto a = tables.initial_of_heading(0);
  const auto b = tables.initial_of_heading(1);
  ASSERT_NE(a, b);

  // Brute-force projection sets straight from the direct successor function.
  auto brute = [&](int heading) {
    std::set<GridCell> cells{{0, 0}};
    for (const auto& s1 : get_successors({0, 0}, init_conf(heading, cs), cs)) {
      cells.insert(s1.cell);
      for (const auto& s2 : get_successors(s1.cell, s1.config, cs)) cells.insert(s2.cell);
    }
    return std::vector<GridCell>(cells.begin(), cells.end());
  };
  EXPECT_EQ(brute(0), brute(1));
  EXPECT_EQ(reachable_projection_set(a, tables), brute(0));
  EXPECT_EQ(tables.soft_id(a), tables.soft_id(b));
}

class GeneratedMesh : public ::testing::Test {
 protected:
  ControlSet cs = generate_arcs(desk_scale_params());
  MeshTables tables = number_configurations(cs);
};

TEST_F(GeneratedMesh, SuccessorsAreUniqueAndFollowTheCostRule) {
  for (int c = 0; c < tables.config_count(); ++c) {
    const auto id = config_id(c);
    std::set<std::pair<GridCell, ConfigId>> seen;
    const auto& config = tables.configuration(id);
    for (const auto& r : tables.successors(id)) {
      EXPECT_TRUE(seen.insert({r.delta, r.next}).second) << "config " << c;
      if (r.kind == SuccessorKind::non_initial) {
        EXPECT_EQ(r.cost, 0.0);
        EXPECT_EQ(r.via_primitive, -1);
        const auto& next = tables.configuration(r.next);
        EXPECT_EQ(next.k, config.k + 1);
        EXPECT_TRUE(std::includes(config.members.begin(), config.members.end(),
                                  next.members.begin(), next.members.end()));
      } else {
        ASSERT_GE(r.via_primitive, 0);
        EXPECT_EQ(r.cost, cs.primitive(r.via_primitive).cost);
        EXPECT_TRUE(tables.is_initial(r.next));
      }
    }
  }
}

TEST_F(GeneratedMesh, MembersRespectUniformIndex) {
  for (int c = 0; c < tables.config_count(); ++c) {
    const auto& config = tables.configuration(config_id(c));
    if (config.empty()) continue;
    EXPECT_TRUE(std::is_sorted(config.members.begin(), config.members.end()));
    for (int m : config.members) EXPECT_LT(config.k, cs.primitive(m).trace_length());
  }
}

// Following one primitive's steps through the tables must trace exactly
// its cells and charge exactly its cost.
TEST_F(GeneratedMesh, SinglePrimitivePath) {
  for (const auto& p : cs.primitives()) {
    ExtendedCell u{0, 0, tables.initial_of_heading(p.start_heading)};
    double cost = 0.0;
    std::vector<GridCell> cells{u.cell()};
    for (int k = 1; k < p.trace_length(); ++k) {
      const auto delta = step_delta(p, k);
      const MeshSuccessor* chosen = nullptr;
      const auto succ = get_successors(u, tables);
      for (const auto& s : succ) {
        const bool last = k == p.trace_length() - 1;
        if (s.cell.cell() != u.cell() + delta) continue;
        if (last && s.via_primitive != p.id) continue;
        if (!last && s.kind != SuccessorKind::non_initial) continue;
        chosen = &s;
      }
      ASSERT_NE(chosen, nullptr) << "primitive " << p.id << " step " << k;
      const auto& members = tables.configuration(chosen->cell.config).members;
      if (k < p.trace_length() - 1) {
        EXPECT_TRUE(std::binary_search(members.begin(), members.end(), p.id));
      }
      cost += chosen->cost;
      u = chosen->cell;
      cells.push_back(u.cell());
    }
    EXPECT_EQ(cells, p.trace) << "primitive " << p.id;
    EXPECT_EQ(cost, p.cost);
    EXPECT_EQ(u.config, tables.initial_of_heading(p.end_heading));
  }
}

TEST_F(GeneratedMesh, SoftIdsMatchProjectionSets) {
  std::map<std::vector<GridCell>, int> class_of;
  for (int c = 0; c < tables.config_count(); ++c) {
    const auto set = reachable_projection_set(config_id(c), tables);
    auto [it, inserted] = class_of.emplace(set, tables.soft_id(config_id(c)));
    EXPECT_EQ(it->second, tables.soft_id(config_id(c)));
  }
  EXPECT_EQ(int(class_of.size()), tables.soft_class_count());
}

TEST_F(GeneratedMesh, NumberingIsDeterministic) {
  EXPECT_EQ(number_configurations(cs).to_json(), tables.to_json());
}

TEST_F(GeneratedMesh, JsonRoundTrip) {
  const auto text = tables.to_json();
  EXPECT_EQ(MeshTables::from_json(text, cs), tables);
  EXPECT_THROW(MeshTables::from_json(text, make_toy2()), ParseError);
  EXPECT_THROW(MeshTables::from_json(text.substr(0, text.size() / 2), cs), ParseError);
}

TEST(MeshGraph, CacheHitAndCorruption) {
  const auto dir = std::filesystem::temp_directory_path() / "meshastar_cache_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "toy2.tables.json").string();
  std::filesystem::remove(path);
  const auto cs = make_toy2();

  const auto first = load_or_build_tables(cs, path);
  EXPECT_FALSE(first.cache_hit);
  const auto bytes = read_text_file(path);
  const auto second = load_or_build_tables(cs, path);
  EXPECT_TRUE(second.cache_hit);
  EXPECT_EQ(second.tables, first.tables);
  EXPECT_EQ(read_text_file(path), bytes);

  write_text_file(path, "{ corrupted");
  const auto third = load_or_build_tables(cs, path);
  EXPECT_FALSE(third.cache_hit);
  EXPECT_FALSE(third.warning.empty());
  EXPECT_EQ(read_text_file(path), bytes);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace meshastar
