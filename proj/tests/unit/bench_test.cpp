#include <gtest/gtest.h>

#include <cmath>
#include <regex>

#include "meshastar/bench.hpp"
#include "meshastar/errors.hpp"
#include "meshastar/render.hpp"
#include "meshastar/synthetic.hpp"

namespace meshastar {
namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

TEST(BenchConfig, ParsesAndResolvesPaths) {
  const auto c = parse_bench_config(R"({
    "map_paths": ["maps/a.map"], "scenario_paths": ["maps/a.map.scen"],
    "control_set_path": "cs.json", "algorithms": ["lba", "mesh"],
    "weights": [1, 1.1], "headings_per_pair": 3, "seed": 9, "k": 50})",
                                    "/data");
  EXPECT_EQ(c.map_paths[0], "/data/maps/a.map");
  EXPECT_EQ(c.control_set_path, "/data/cs.json");
  EXPECT_EQ(c.algorithms, (std::vector<Algorithm>{Algorithm::lba, Algorithm::mesh}));
  EXPECT_EQ(c.weights, (std::vector<double>{1.0, 1.1}));
  EXPECT_EQ(c.seed, 9U);
  EXPECT_EQ(c.k, 50);
}

TEST(BenchConfig, RejectsBadFields) {
  const std::string base =
      R"("map_paths": ["a"], "scenario_paths": ["b"], "control_set_path": "c")";
  EXPECT_THROW(parse_bench_config("{" + base + R"(, "algorithms": ["dfs"]})"), ParseError);
  EXPECT_THROW(parse_bench_config("{" + base + R"(, "algorithms": ["lba"], "weights": []})"),
               ParseError);
  EXPECT_THROW(parse_bench_config("{" + base + R"(, "algorithms": ["lba"], "weights": [0.5]})"),
               ParseError);
  EXPECT_THROW(
      parse_bench_config("{" + base + R"(, "algorithms": ["lba"], "headings_per_pair": 0})"),
      ParseError);
}

TEST(BenchInstances, SeededHeadingsAreReproducible) {
  const auto grid = OccupancyGrid::empty(16, 16);
  const std::vector<std::vector<ScenarioEntry>> scen = {make_scenarios(grid, "g", 5, 2.0, 1)};
  const auto a = make_instances(scen, 8, 3, 42, 0);
  const auto b = make_instances(scen, 8, 3, 42, 0);
  ASSERT_EQ(a.size(), 15U);
  for (std::size_t n = 0; n < a.size(); ++n) {
    EXPECT_EQ(a[n].start, b[n].start);
    EXPECT_EQ(a[n].goal, b[n].goal);
    EXPECT_EQ(a[n].scen_index, n / 3);
    EXPECT_LT(a[n].start.heading, 8);
  }
  EXPECT_EQ(make_instances(scen, 8, 1, 42, 2).size(), 2U);
}

TEST(BenchCsv, RowsRoundTrip) {
  BenchRecord r;
  r.map = "maze";
  r.scen_index = 4;
  r.start = {1, 2, 3};
  r.goal = {4, 5, 6};
  r.algo = "mesh_parall";
  r.weight = 1.1;
  r.solved = true;
  r.cost = 12.345678901234;
  r.oracle_cost = 12.0;
  r.cost_ratio = *r.cost / 12.0;
  r.expansions = 10;
  r.generated = 20;
  r.collision_checks = 30;
  r.runtime_us = 40;
  EXPECT_EQ(parse_csv_row(to_csv_row(r)), r);
  BenchRecord unsolved = r;
  unsolved.solved = false;
  unsolved.cost.reset();
  unsolved.cost_ratio.reset();
  EXPECT_EQ(parse_csv_row(to_csv_row(unsolved)), unsolved);
  const auto all = parse_csv(csv_header() + "\n" + to_csv_row(r) + "\n" + to_csv_row(unsolved) + "\n");
  EXPECT_EQ(all, (std::vector<BenchRecord>{r, unsolved}));
  EXPECT_THROW(parse_csv_row("a,b"), ParseError);
  EXPECT_THROW(parse_csv("wrong,header\n"), ParseError);
}

TEST(BenchRun, LbaAndMeshCostsAgree) {
  BenchInputs in;
  in.control_set = make_toy2();
  in.tables = number_configurations(in.control_set);
  in.map_names = {"rand"};
  in.grids = {random_grid(24, 24, 0.15, 3)};
  in.instances = make_instances({make_scenarios(in.grids[0], "rand", 8, 4.0, 3)}, 2, 2, 1, 0);
  BenchConfig config;
  config.algorithms = {Algorithm::lba, Algorithm::mesh};
  config.weights = {1.0};
  const auto serial = run_bench(config, in, 1);
  const auto threaded = run_bench(config, in, 3);
  ASSERT_EQ(serial.size(), in.instances.size() * 2);
  ASSERT_EQ(threaded.size(), serial.size());
  for (std::size_t n = 0; n < serial.size(); n += 2) {
    EXPECT_EQ(serial[n].solved, serial[n + 1].solved);
    if (serial[n].solved) {
      EXPECT_NEAR(*serial[n].cost, *serial[n + 1].cost, 1e-9);
      EXPECT_NEAR(*serial[n].cost_ratio, 1.0, 1e-9);
    }
    auto a = serial[n];
    auto b = threaded[n];
    a.runtime_us = b.runtime_us = 0;
    EXPECT_EQ(a, b);
  }
  const auto summary = summarize(serial);
  ASSERT_EQ(summary.size(), 2U);
  EXPECT_EQ(summary[0].algo, "lba");
  EXPECT_NE(format_summary(summary).find("mesh"), std::string::npos);
}

TEST(BenchSummary, MediansArePaired) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));

  auto rec = [](std::size_t scen, const char* algo, bool solved, std::size_t expansions) {
    BenchRecord r;
    r.map = "m";
    r.scen_index = scen;
    r.algo = algo;
    r.solved = solved;
    r.expansions = expansions;
    r.runtime_us = 10;
    if (solved) {
      r.cost = 1.0;
      r.cost_ratio = 1.0;
    }
    return r;
  };
  // Instance 2 is unsolved by mesh, so it is excluded for both algorithms.
  const auto rows = summarize({rec(0, "lba", true, 10), rec(0, "mesh", true, 4),
                               rec(1, "lba", true, 20), rec(1, "mesh", true, 6),
                               rec(2, "lba", true, 1000), rec(2, "mesh", false, 1)});
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[0].paired, 2U);
  EXPECT_EQ(rows[0].median_expansions, 15.0);
  EXPECT_EQ(rows[1].median_expansions, 5.0);
  EXPECT_EQ(rows[1].median_runtime_ratio, 1.0);
  EXPECT_NE(format_summary(rows).find("mesh median expansions below lba"), std::string::npos);
}

TEST(Render, EmptyMapHasNoTrajectoryElements) {
  const auto grid = OccupancyGrid::empty(4, 3);
  const auto svg = render_svg(grid, make_toy2());
  EXPECT_EQ(count_of(svg, "<polyline"), 0U);
  EXPECT_EQ(count_of(svg, "class=\"swept\""), 0U);
  EXPECT_EQ(count_of(svg, "class=\"blocked\""), 0U);
  const auto t = make_trajectory({});
  EXPECT_EQ(render_svg(grid, make_toy2(), &t), svg);
}

TEST(Render, ThreeCellTraceShadesThreeCells) {
  const auto cs = make_toy2();
  const auto grid = OccupancyGrid::empty(5, 5).with_cell({4, 4}, true);
  const auto t = make_trajectory({instantiate(cs.primitive(0), {1, 1, 0})});
  const auto svg = render_svg(grid, cs, &t);
  EXPECT_EQ(count_of(svg, "class=\"swept\""), 3U);
  EXPECT_EQ(count_of(svg, "class=\"blocked\""), 1U);
  EXPECT_EQ(count_of(svg, "<polyline"), 1U);
  EXPECT_EQ(count_of(svg, "class=\"start\""), 1U);
  EXPECT_EQ(count_of(svg, "class=\"goal\""), 1U);
  EXPECT_EQ(render_svg(grid, cs, &t), svg);
}

TEST(Render, OnePolylinePerPrimitive) {
  const auto cs = generate_arcs(desk_scale_params());
  const auto tables = number_configurations(cs);
  const auto grid = OccupancyGrid::empty(20, 20);
  const PlanRequest req{grid, cs, &tables, {2, 2, 0}, {15, 12, 2}, 1.0};
  const auto r = plan_mesh(req);
  ASSERT_TRUE(r.metrics.solved);
  const auto svg = render_svg(grid, cs, &*r.trajectory);
  EXPECT_EQ(count_of(svg, "<polyline"), r.trajectory->primitives.size());
}

TEST(TrajectoryFile, RoundTrip) {
  const auto cs = make_toy2();
  const auto t = make_trajectory({instantiate(cs.primitive(1), {0, 0, 0}),
                                  instantiate(cs.primitive(2), {1, 1, 1})});
  const auto back = load_trajectory(save_trajectory(t), cs);
  EXPECT_EQ(back.primitives, t.primitives);
  EXPECT_EQ(back.total_cost, t.total_cost);
  EXPECT_THROW(load_trajectory(R"({"primitives":[{"id":2,"start":[0,0,0]}]})", cs), ParseError);
  EXPECT_THROW(load_trajectory("[]", cs), ParseError);
}

}  // namespace
}  // namespace meshastar
