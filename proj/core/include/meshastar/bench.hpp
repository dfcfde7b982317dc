#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meshastar/search.hpp"

namespace meshastar {

/// Benchmark sweep description (JSON on disk, see parse_bench_config).
struct BenchConfig {
  std::vector<std::string> map_paths;
  std::vector<std::string> scenario_paths;  // parallel to map_paths
  std::string control_set_path;
  std::string tables_cache_path;  // optional
  std::vector<Algorithm> algorithms;
  std::vector<double> weights = {1.0};
  int headings_per_pair = 3;
  std::uint64_t seed = 1;
  int k = 100;
  int max_pairs_per_map = 0;  // 0 = every scenario entry
  std::string output_path;
};

/// Relative paths in the file are resolved against `base_dir`.
BenchConfig parse_bench_config(std::string_view json_text, const std::string& base_dir = "");

struct BenchInstance {
  std::size_t map_index = 0;
  std::size_t scen_index = 0;
  DiscreteState start;
  DiscreteState goal;
};

/// Start/goal cells come from the scenario entries; for each entry
/// `headings_per_pair` heading pairs are drawn from one seeded stream in
/// entry order.
std::vector<BenchInstance> make_instances(const std::vector<std::vector<ScenarioEntry>>& scenarios,
                                          int heading_count, int headings_per_pair,
                                          std::uint64_t seed, int max_pairs_per_map);

struct BenchRecord {
  std::string map;
  std::size_t scen_index = 0;
  DiscreteState start;
  DiscreteState goal;
  std::string algo;
  double weight = 1.0;
  bool solved = false;
  std::optional<double> cost;
  std::optional<double> oracle_cost;
  std::optional<double> cost_ratio;
  std::size_t expansions = 0;
  std::size_t generated = 0;
  std::size_t collision_checks = 0;
  std::int64_t runtime_us = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// Fixed CSV layout:
/// map,scen_index,si,sj,stheta,gi,gj,gtheta,algo,w,solved,cost,oracle_cost,cost_ratio,
/// expansions,generated,collision_checks,runtime_us
std::string csv_header();
std::string to_csv_row(const BenchRecord& r);
BenchRecord parse_csv_row(std::string_view line);
std::vector<BenchRecord> parse_csv(std::string_view text);

struct BenchInputs {
  std::vector<std::string> map_names;
  std::vector<OccupancyGrid> grids;
  ControlSet control_set;
  MeshTables tables;
  std::vector<BenchInstance> instances;
};

/// Reads and validates every input file. Throws before any search runs.
BenchInputs load_bench_inputs(const BenchConfig& config);

/// Runs every instance x algorithm x weight. Rows come back in instance
/// order regardless of `jobs`. The oracle is solved once per instance.
std::vector<BenchRecord> run_bench(const BenchConfig& config, const BenchInputs& inputs, int jobs,
                                   const std::function<void(std::size_t, std::size_t)>& progress = {});

struct SummaryRow {
  std::string map;
  std::string algo;
  double weight = 1.0;
  std::size_t paired = 0;  // instances solved by every algorithm
  double median_runtime_ratio = 0.0;  // vs lba on the same instance; NaN without lba
  double median_cost_ratio = 0.0;     // vs oracle
  double median_expansions = 0.0;
  double median_collision_checks = 0.0;
  double median_runtime_us = 0.0;
};

double median(std::vector<double> values);

/// Per (map, weight, algorithm) medians over the instances every algorithm
/// solved.
std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace meshastar
