#include <gtest/gtest.h>

#include <set>

#include "meshastar/lattice.hpp"
#include "meshastar/synthetic.hpp"

namespace meshastar {
namespace {

constexpr int E = 0;

TEST(Lattice, Toy2SuccessorsFromEast) {
  const auto cs = make_toy2();
  const auto edges = lattice_successors({0, 0, E}, cs);
  ASSERT_EQ(edges.size(), 2U);
  EXPECT_EQ(edges[0].instance.end_state, (DiscreteState{2, 0, 0}));
  EXPECT_EQ(edges[0].cost, 2.0);
  EXPECT_EQ(edges[1].instance.end_state, (DiscreteState{1, 1, 1}));
  EXPECT_EQ(edges[1].cost, 2.2);
}

TEST(Lattice, HeadingWithoutPrimitives) {
  ControlSet cs(3, {0, 90, 180}, make_toy2().primitives());
  EXPECT_TRUE(lattice_successors({0, 0, 2}, cs).empty());
}

TEST(Lattice, SuccessorsTranslate) {
  const auto cs = generate_arcs(desk_scale_params());
  for (int h = 0; h < cs.heading_count(); ++h) {
    const auto a = lattice_successors({0, 0, h}, cs);
    const auto b = lattice_successors({5, 7, h}, cs);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_EQ(a.size(), cs.outgoing(h).size());
    std::set<DiscreteState> ends;
    for (std::size_t n = 0; n < a.size(); ++n) {
      const auto& ea = a[n].instance.end_state;
      const auto& eb = b[n].instance.end_state;
      EXPECT_EQ((DiscreteState{ea.i + 5, ea.j + 7, ea.heading}), eb);
      ends.insert(ea);
    }
    EXPECT_EQ(ends.size(), a.size()) << "two successors share an end state";
  }
}

TEST(Lattice, TraceFreeOnEmptyGrid) {
  const auto grid = OccupancyGrid::empty(10, 10);
  const auto check = trace_is_free(instantiate(make_toy2().primitive(0), {0, 0, E}), grid);
  EXPECT_TRUE(check.free);
  EXPECT_EQ(check.cells_checked, 3U);
}

TEST(Lattice, TraceCheckShortCircuits) {
  const auto grid = OccupancyGrid::empty(10, 10).with_cell({1, 0}, true);
  const auto cs = make_toy2();
  const auto& p = cs.primitive(0);
  const auto check = trace_is_free(instantiate(p, {0, 0, E}), grid);
  EXPECT_FALSE(check.free);
  EXPECT_EQ(check.cells_checked, 2U);
  const auto same = trace_is_free(p, {0, 0}, grid);
  EXPECT_EQ(same.free, check.free);
  EXPECT_EQ(same.cells_checked, check.cells_checked);
}

TEST(Lattice, TraceLeavingTheMap) {
  const auto grid = OccupancyGrid::empty(10, 10);
  EXPECT_FALSE(trace_is_free(instantiate(make_toy2().primitive(0), {8, 0, E}), grid).free);
}

}  // namespace
}  // namespace meshastar
