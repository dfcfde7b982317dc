#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "meshastar/control_set.hpp"
#include "meshastar/errors.hpp"

namespace meshastar {
namespace {

constexpr int E = 0;
constexpr int N = 1;

bool mentions(const std::vector<Violation>& vs, const std::string& needle) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Violation& v) { return v.message.find(needle) != std::string::npos; });
}

TEST(ControlSet, Toy2Validates) {
  const auto cs = make_toy2();
  EXPECT_TRUE(validate(cs).empty());
  ASSERT_EQ(cs.size(), 4U);
  // Checked one by one against the invariants rather than trusting validate().
  for (const auto& p : cs.primitives()) {
    EXPECT_EQ(p.trace.front(), (GridCell{0, 0}));
    EXPECT_EQ(p.trace.back(), p.end_offset);
    EXPECT_GE(p.trace_length(), 2);
    EXPECT_GT(p.cost, 0.0);
  }
  EXPECT_EQ(std::vector<int>(cs.outgoing(E).begin(), cs.outgoing(E).end()), (std::vector<int>{0, 1}));
  EXPECT_EQ(std::vector<int>(cs.outgoing(N).begin(), cs.outgoing(N).end()), (std::vector<int>{2, 3}));
}

TEST(ControlSet, DuplicateTripleNamesBothIds) {
  auto prims = make_toy2().primitives();
  auto dup = prims[0];
  dup.id = 4;
  dup.cost = 3.0;
  prims.push_back(dup);
  const auto vs = validate(ControlSet(2, {0, 90}, prims));
  ASSERT_EQ(vs.size(), 1U);
  EXPECT_EQ(vs[0].primitive_id, 4);
  EXPECT_NE(vs[0].message.find("primitive 0"), std::string::npos);
}

TEST(ControlSet, TraceMustStartAtOrigin) {
  auto prims = make_toy2().primitives();
  prims[2].trace = {{1, 0}, {0, 1}, {0, 2}};
  const auto vs = validate(ControlSet(2, {0, 90}, prims));
  EXPECT_TRUE(mentions(vs, "trace must start at (0,0)"));
}

TEST(ControlSet, OtherViolations) {
  auto prims = make_toy2().primitives();
  prims[0].cost = 0.0;
  prims[1].trace = {{0, 0}, {1, 0}, {1, 0}, {1, 1}};
  prims[3].end_offset = {2, 2};
  const auto vs = validate(ControlSet(2, {0, 90}, prims));
  EXPECT_TRUE(mentions(vs, "cost must be positive"));
  EXPECT_TRUE(mentions(vs, "consecutive trace cells"));
  EXPECT_TRUE(mentions(vs, "end_offset"));
}

TEST(ControlSet, SaveLoadRoundTrip) {
  const auto cs = make_toy2();
  const auto text = save_control_set(cs);
  EXPECT_EQ(load_control_set(text), cs);
  EXPECT_EQ(save_control_set(load_control_set(text)), text);

  const auto gen = generate_arcs(desk_scale_params());
  EXPECT_EQ(load_control_set(save_control_set(gen)), gen);
}

TEST(ControlSet, LoadRejectsNegativeCostWithPath) {
  auto text = save_control_set(make_toy2());
  const auto at = text.find("2.2");
  text.replace(at, 3, "-2.2");
  try {
    load_control_set(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location(), "primitives[1].cost");
  }
}

TEST(ControlSet, LoadRejectsHeadingOutOfRange) {
  const std::string text = R"({"heading_count": 2, "primitives": [
    {"id": 0, "start_heading": 0, "end_heading": 2, "end_offset": [1, 0],
     "trace": [[0, 0], [1, 0]], "cost": 1.0}]})";
  try {
    load_control_set(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location(), "primitives[0].end_heading");
  }
  EXPECT_THROW(load_control_set("{\"heading_count\": 2}"), ParseError);
  EXPECT_THROW(load_control_set("not json"), ParseError);
}

TEST(Rasterize, AxisAlignedSegment) {
  const std::vector<Point2> line = {{0.5, 0.5}, {2.5, 0.5}};
  EXPECT_EQ(rasterize(line), (std::vector<GridCell>{{0, 0}, {1, 0}, {2, 0}}));
}

TEST(Rasterize, SinglePointIsAnError) {
  const std::vector<Point2> one = {{0.5, 0.5}};
  EXPECT_THROW(rasterize(one), ContractViolation);
  EXPECT_THROW(rasterize({}), ContractViolation);
}

TEST(Rasterize, DiagonalThroughCornerTakesBothSideCells) {
  const std::vector<Point2> line = {{0.5, 0.5}, {1.5, 1.5}};
  const auto cells = rasterize(line);
  EXPECT_EQ(cells.front(), (GridCell{0, 0}));
  EXPECT_EQ(cells.back(), (GridCell{1, 1}));
  EXPECT_EQ(cells.size(), 4U);
}

// Quarter circle of radius 2 from heading east to heading north, checked
// against a much denser sampling of the same curve.
TEST(Rasterize, QuarterArcAgainstDenseSampling) {
  auto point = [](double t) {
    return Point2{0.5 + 2.0 * std::sin(t), 2.5 - 2.0 * std::cos(t)};
  };
  std::vector<Point2> coarse;
  for (int s = 0; s <= 40; ++s) coarse.push_back(point(std::numbers::pi / 2 * s / 40.0));
  const auto cells = rasterize(coarse);

  std::map<GridCell, std::size_t> position;
  for (std::size_t n = 0; n < cells.size(); ++n) position.emplace(cells[n], n);
  EXPECT_EQ(position.size(), cells.size()) << "a cell is visited twice";

  std::size_t last = 0;
  for (int s = 0; s <= 100000; ++s) {
    const auto p = point(std::numbers::pi / 2 * s / 100000.0);
    const GridCell c{int(std::floor(p.x)), int(std::floor(p.y))};
    auto it = position.find(c);
    ASSERT_NE(it, position.end()) << "sample cell " << c << " missing";
    EXPECT_GE(it->second, last) << "order not monotone at " << c;
    last = std::max(last, it->second);
  }
  EXPECT_EQ(cells.front(), (GridCell{0, 0}));
  EXPECT_EQ(cells.back(), (GridCell{2, 2}));
}

TEST(Generator, StraightOnlyEightHeadings) {
  ArcGeneratorParams params;
  params.heading_count = 8;
  params.straight_lengths = {1};
  const auto cs = generate_arcs(params);
  ASSERT_EQ(cs.size(), 8U);
  EXPECT_TRUE(validate(cs).empty());
  for (const auto& p : cs.primitives()) {
    const bool diagonal = p.end_offset.i != 0 && p.end_offset.j != 0;
    EXPECT_DOUBLE_EQ(p.cost, diagonal ? std::sqrt(2.0) : 1.0) << p.id;
    EXPECT_EQ(p.start_heading, p.end_heading);
  }
}

TEST(Generator, CostScalesWithCellSize) {
  ArcGeneratorParams params;
  params.heading_count = 8;
  params.straight_lengths = {1};
  params.cell_size = 0.5;
  for (const auto& p : generate_arcs(params).primitives()) {
    const bool diagonal = p.end_offset.i != 0 && p.end_offset.j != 0;
    EXPECT_DOUBLE_EQ(p.cost, diagonal ? std::sqrt(2.0) / 2 : 0.5);
  }
}

TEST(Generator, ArcsComeInMirrorPairs) {
  ArcGeneratorParams params;
  params.heading_count = 8;
  params.straight_lengths = {1};
  params.arc_radii = {2.0};
  const auto cs = generate_arcs(params);
  EXPECT_TRUE(validate(cs).empty());
  for (int h = 0; h < 8; ++h) {
    std::map<int, const MotionPrimitive*> by_end;
    for (int id : cs.outgoing(h)) {
      const auto& p = cs.primitive(id);
      if (p.end_heading != h) by_end[p.end_heading] = &p;
    }
    const auto* left = by_end.at((h + 1) % 8);
    const auto* right = by_end.at((h + 7) % 8);
    EXPECT_NEAR(left->cost, right->cost, 1e-12) << "heading " << h;
    EXPECT_EQ(left->trace.size(), right->trace.size());
  }
}

TEST(Generator, FullScaleHasTwentyFourPerHeading) {
  const auto cs = generate_arcs(full_scale_params());
  EXPECT_TRUE(validate(cs).empty());
  EXPECT_EQ(cs.heading_count(), 16);
  for (int h = 0; h < 16; ++h) EXPECT_EQ(cs.outgoing(h).size(), 24U) << h;
}

TEST(Generator, DeterministicBytes) {
  EXPECT_EQ(save_control_set(generate_arcs(desk_scale_params())),
            save_control_set(generate_arcs(desk_scale_params())));
  EXPECT_EQ(content_hash(generate_arcs(desk_scale_params())),
            content_hash(generate_arcs(desk_scale_params())));
  EXPECT_NE(content_hash(make_toy2()), content_hash(generate_arcs(desk_scale_params())));
}

TEST(Generator, TracesAreEightAdjacent) {
  const auto cs = generate_arcs(desk_scale_params());
  for (const auto& p : cs.primitives()) {
    for (std::size_t c = 1; c < p.trace.size(); ++c) {
      const auto d = p.trace[c] - p.trace[c - 1];
      EXPECT_LE(std::max(std::abs(d.i), std::abs(d.j)), 1) << "primitive " << p.id;
    }
  }
}

TEST(Generator, ImpossibleParametersAreReported) {
  ArcGeneratorParams params;
  params.heading_count = 6;
  EXPECT_THROW(generate_arcs(params), ContractViolation);
  params.heading_count = 8;
  params.straight_lengths = {0};
  EXPECT_THROW(generate_arcs(params), ContractViolation);
}

TEST(Instantiate, ShiftsTraceAndEndState) {
  const auto cs = make_toy2();
  const auto inst = instantiate(cs.primitive(0), {5, 5, E});
  EXPECT_EQ(inst.end_state, (DiscreteState{7, 5, E}));
  EXPECT_EQ(inst.absolute_trace, (std::vector<GridCell>{{5, 5}, {6, 5}, {7, 5}}));
  EXPECT_EQ(inst.cost, 2.0);
}

TEST(Instantiate, AtOriginKeepsTemplateTrace) {
  const auto cs = make_toy2();
  for (const auto& p : cs.primitives()) {
    EXPECT_EQ(instantiate(p, {0, 0, p.start_heading}).absolute_trace, p.trace);
  }
}

TEST(Instantiate, HeadingMismatchIsAContractViolation) {
  // Primitive 1 turns E -> N, so it cannot start facing north.
  EXPECT_THROW(instantiate(make_toy2().primitive(1), {0, 0, N}), ContractViolation);
}

TEST(Instantiate, CommutesWithTranslation) {
  const auto cs = generate_arcs(desk_scale_params());
  for (const auto& p : cs.primitives()) {
    const auto a = instantiate(p, {2, -3, p.start_heading});
    const auto b = instantiate(p, {9, 4, p.start_heading});
    ASSERT_EQ(a.absolute_trace.size(), b.absolute_trace.size());
    for (std::size_t c = 0; c < a.absolute_trace.size(); ++c) {
      EXPECT_EQ(a.absolute_trace[c] + (GridCell{7, 7}), b.absolute_trace[c]);
    }
  }
}

}  // namespace
}  // namespace meshastar
