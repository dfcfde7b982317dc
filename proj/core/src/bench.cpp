#include "meshastar/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "meshastar/errors.hpp"
#include "meshastar/synthetic.hpp"

namespace meshastar {

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

BenchConfig parse_bench_config(std::string_view json_text, const std::string& base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("invalid bench config: ") + e.what());
  }
  BenchConfig c;
  try {
    for (const auto& p : doc.at("map_paths")) c.map_paths.push_back(resolve(p.get<std::string>(), base_dir));
    for (const auto& p : doc.at("scenario_paths")) {
      c.scenario_paths.push_back(resolve(p.get<std::string>(), base_dir));
    }
    c.control_set_path = resolve(doc.at("control_set_path").get<std::string>(), base_dir);
    c.tables_cache_path = resolve(doc.value("tables_cache_path", std::string()), base_dir);
    for (const auto& a : doc.at("algorithms")) {
      auto algo = parse_algorithm(a.get<std::string>());
      if (!algo) throw ParseError("algorithms", "unknown algorithm '" + a.get<std::string>() + "'");
      c.algorithms.push_back(*algo);
    }
    if (doc.contains("weights")) c.weights = doc.at("weights").get<std::vector<double>>();
    c.headings_per_pair = doc.value("headings_per_pair", 3);
    c.seed = doc.value("seed", std::uint64_t{1});
    c.k = doc.value("k", 100);
    c.max_pairs_per_map = doc.value("max_pairs_per_map", 0);
    c.output_path = resolve(doc.value("output_path", std::string()), base_dir);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("malformed bench config: ") + e.what());
  }
  if (c.map_paths.empty()) throw ParseError("map_paths", "at least one map is required");
  if (c.map_paths.size() != c.scenario_paths.size()) {
    throw ParseError("scenario_paths", "needs one scenario file per map");
  }
  if (c.algorithms.empty()) throw ParseError("algorithms", "at least one algorithm is required");
  if (c.weights.empty()) throw ParseError("weights", "at least one weight is required");
  for (double w : c.weights) {
    if (!(w >= 1.0)) throw ParseError("weights", "weights must be >= 1");
  }
  if (c.headings_per_pair < 1) throw ParseError("headings_per_pair", "must be >= 1");
  if (c.k < 1) throw ParseError("k", "must be >= 1");
  return c;
}

std::vector<BenchInstance> make_instances(const std::vector<std::vector<ScenarioEntry>>& scenarios,
                                          int heading_count, int headings_per_pair,
                                          std::uint64_t seed, int max_pairs_per_map) {
  Rng rng(seed);
  std::vector<BenchInstance> out;
  for (std::size_t m = 0; m < scenarios.size(); ++m) {
    std::size_t limit = scenarios[m].size();
    if (max_pairs_per_map > 0) limit = std::min(limit, std::size_t(max_pairs_per_map));
    for (std::size_t s = 0; s < limit; ++s) {
      const auto& e = scenarios[m][s];
      for (int n = 0; n < headings_per_pair; ++n) {
        BenchInstance inst;
        inst.map_index = m;
        inst.scen_index = s;
        const int sh = int(uniform_index(rng, std::uint64_t(heading_count)));
        const int gh = int(uniform_index(rng, std::uint64_t(heading_count)));
        inst.start = {e.start_cell.i, e.start_cell.j, sh};
        inst.goal = {e.goal_cell.i, e.goal_cell.j, gh};
        out.push_back(inst);
      }
    }
  }
  return out;
}

std::string csv_header() {
  return "map,scen_index,si,sj,stheta,gi,gj,gtheta,algo,w,solved,cost,oracle_cost,cost_ratio,"
         "expansions,generated,collision_checks,runtime_us";
}

std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream out;
  out << r.map << ',' << r.scen_index << ',' << r.start.i << ',' << r.start.j << ','
      << r.start.heading << ',' << r.goal.i << ',' << r.goal.j << ',' << r.goal.heading << ','
      << r.algo << ',' << format_double(r.weight) << ',' << (r.solved ? 1 : 0) << ','
      << format_optional(r.cost) << ',' << format_optional(r.oracle_cost) << ','
      << format_optional(r.cost_ratio) << ',' << r.expansions << ',' << r.generated << ','
      << r.collision_checks << ',' << r.runtime_us;
  return out.str();
}

namespace {

template <typename T>
T parse_field(std::string_view s, std::size_t column) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("column " + std::to_string(column + 1), "invalid value '" + std::string(s) + "'");
  }
  return value;
}

std::optional<double> parse_optional(std::string_view s, std::size_t column) {
  if (s.empty()) return std::nullopt;
  return parse_field<double>(s, column);
}

}  // namespace

BenchRecord parse_csv_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> f;
  std::size_t pos = 0;
  while (true) {
    const auto end = line.find(',', pos);
    f.push_back(line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  if (f.size() != 18) {
    throw ParseError("", "expected 18 CSV columns, found " + std::to_string(f.size()));
  }
  BenchRecord r;
  r.map = std::string(f[0]);
  r.scen_index = parse_field<std::size_t>(f[1], 1);
  r.start = {parse_field<int>(f[2], 2), parse_field<int>(f[3], 3), parse_field<int>(f[4], 4)};
  r.goal = {parse_field<int>(f[5], 5), parse_field<int>(f[6], 6), parse_field<int>(f[7], 7)};
  r.algo = std::string(f[8]);
  if (!parse_algorithm(r.algo)) throw ParseError("column 9", "unknown algorithm");
  r.weight = parse_field<double>(f[9], 9);
  r.solved = parse_field<int>(f[10], 10) != 0;
  r.cost = parse_optional(f[11], 11);
  r.oracle_cost = parse_optional(f[12], 12);
  r.cost_ratio = parse_optional(f[13], 13);
  r.expansions = parse_field<std::size_t>(f[14], 14);
  r.generated = parse_field<std::size_t>(f[15], 15);
  r.collision_checks = parse_field<std::size_t>(f[16], 16);
  r.runtime_us = parse_field<std::int64_t>(f[17], 17);
  return r;
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line == "\r") continue;
    if (header) {
      if (line.back() == '\r') line.remove_suffix(1);
      if (line != csv_header()) throw ParseError("line 1", "unexpected CSV header");
      header = false;
      continue;
    }
    out.push_back(parse_csv_row(line));
  }
  return out;
}

BenchInputs load_bench_inputs(const BenchConfig& config) {
  BenchInputs in;
  in.control_set = load_control_set(read_text_file(config.control_set_path));
  in.tables = load_or_build_tables(in.control_set, config.tables_cache_path).tables;
  std::vector<std::vector<ScenarioEntry>> scenarios;
  for (std::size_t m = 0; m < config.map_paths.size(); ++m) {
    auto grid = parse_map(read_text_file(config.map_paths[m]));
    auto entries = parse_scen(read_text_file(config.scenario_paths[m]));
    for (std::size_t e = 0; e < entries.size(); ++e) validate_entry(entries[e], grid, e);
    in.map_names.push_back(std::filesystem::path(config.map_paths[m]).stem().string());
    in.grids.push_back(std::move(grid));
    scenarios.push_back(std::move(entries));
  }
  in.instances = make_instances(scenarios, in.control_set.heading_count(), config.headings_per_pair,
                                config.seed, config.max_pairs_per_map);
  return in;
}

std::vector<BenchRecord> run_bench(const BenchConfig& config, const BenchInputs& inputs, int jobs,
                                   const std::function<void(std::size_t, std::size_t)>& progress) {
  const std::size_t count = inputs.instances.size();
  std::vector<std::vector<BenchRecord>> per_instance(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t n = next++; n < count; n = next++) {
      const auto& inst = inputs.instances[n];
      const auto& grid = inputs.grids[inst.map_index];
      PlanRequest base{grid, inputs.control_set, &inputs.tables, inst.start, inst.goal, 1.0};
      const auto oracle = dijkstra_oracle(base);
      auto& rows = per_instance[n];
      for (double w : config.weights) {
        for (auto algo : config.algorithms) {
          PlanRequest req{grid, inputs.control_set, &inputs.tables, inst.start, inst.goal, w};
          const auto result = plan(algo, req, config.k);
          BenchRecord r;
          r.map = inputs.map_names[inst.map_index];
          r.scen_index = inst.scen_index;
          r.start = inst.start;
          r.goal = inst.goal;
          r.algo = algorithm_name(algo);
          r.weight = w;
          r.solved = result.metrics.solved;
          r.cost = result.metrics.cost;
          r.oracle_cost = oracle;
          if (r.cost && oracle && *oracle > 0) r.cost_ratio = *r.cost / *oracle;
          if (r.cost && oracle && *oracle == 0) r.cost_ratio = 1.0;
          r.expansions = result.metrics.expansions;
          r.generated = result.metrics.generated;
          r.collision_checks = result.metrics.collision_checks;
          r.runtime_us =
              std::chrono::duration_cast<std::chrono::microseconds>(result.metrics.runtime).count();
          rows.push_back(std::move(r));
        }
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, count);
      }
    }
  };

  const int threads = std::max(1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<BenchRecord> out;
  for (auto& rows : per_instance) {
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  using InstanceKey = std::tuple<std::size_t, DiscreteState, DiscreteState>;
  using GroupKey = std::pair<std::string, double>;

  std::map<GroupKey, std::vector<std::string>> algos_of_group;
  std::map<GroupKey, std::map<InstanceKey, std::map<std::string, const BenchRecord*>>> groups;
  for (const auto& r : records) {
    const GroupKey g{r.map, r.weight};
    auto& algos = algos_of_group[g];
    if (std::find(algos.begin(), algos.end(), r.algo) == algos.end()) algos.push_back(r.algo);
    groups[g][{r.scen_index, r.start, r.goal}][r.algo] = &r;
  }

  std::vector<SummaryRow> out;
  for (const auto& [g, instances] : groups) {
    const auto& algos = algos_of_group[g];
    std::vector<const std::map<std::string, const BenchRecord*>*> paired;
    for (const auto& [key, by_algo] : instances) {
      bool all = by_algo.size() == algos.size();
      for (const auto& [name, rec] : by_algo) all = all && rec->solved;
      if (all) paired.push_back(&by_algo);
    }
    for (const auto& algo : algos) {
      std::vector<double> runtime_ratio, cost_ratio, expansions, checks, runtime;
      for (const auto* by_algo : paired) {
        const auto* r = by_algo->at(algo);
        if (auto lba = by_algo->find("lba"); lba != by_algo->end() && lba->second->runtime_us > 0) {
          runtime_ratio.push_back(double(r->runtime_us) / double(lba->second->runtime_us));
        }
        if (r->cost_ratio) cost_ratio.push_back(*r->cost_ratio);
        expansions.push_back(double(r->expansions));
        checks.push_back(double(r->collision_checks));
        runtime.push_back(double(r->runtime_us));
      }
      SummaryRow row;
      row.map = g.first;
      row.weight = g.second;
      row.algo = algo;
      row.paired = paired.size();
      row.median_runtime_ratio = median(runtime_ratio);
      row.median_cost_ratio = median(cost_ratio);
      row.median_expansions = median(expansions);
      row.median_collision_checks = median(checks);
      row.median_runtime_us = median(runtime);
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %6s %-13s %7s %10s %10s %12s %12s %11s\n", "map", "w",
                "algo", "paired", "rt/lba", "cost/opt", "expansions", "coll_checks", "runtime_us");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-20s %6.2f %-13s %7zu %9.1f%% %9.2f%% %12.0f %12.0f %11.0f\n",
                  r.map.c_str(), r.weight, r.algo.c_str(), r.paired, 100.0 * r.median_runtime_ratio,
                  100.0 * r.median_cost_ratio, r.median_expansions, r.median_collision_checks,
                  r.median_runtime_us);
    out << line;
  }
  // Machine-independent proxy for the runtime comparison.
  std::map<std::pair<std::string, double>, std::pair<double, double>> mesh_vs_lba;
  for (const auto& r : rows) {
    auto& slot = mesh_vs_lba[{r.map, r.weight}];
    if (r.algo == "lba") slot.first = r.median_expansions;
    if (r.algo == "mesh") slot.second = r.median_expansions;
  }
  for (const auto& [key, v] : mesh_vs_lba) {
    if (v.first > 0 && v.second > 0) {
      out << key.first << " w=" << format_double(key.second) << ": mesh median expansions "
          << (v.second < v.first ? "below" : "not below") << " lba (" << v.second << " vs "
          << v.first << ")\n";
    }
  }
  return out.str();
}

}  // namespace meshastar
