// meshastar command-line front end.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 no path, 3 validation failure.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meshastar/bench.hpp"
#include "meshastar/errors.hpp"
#include "meshastar/render.hpp"
#include "meshastar/synthetic.hpp"

namespace ms = meshastar;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitNoPath = 2;
constexpr int kExitInvalid = 3;

struct ExitWith {
  int code;
};

std::string format_cost(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

ms::DiscreteState parse_state(const std::string& text, const char* what) {
  ms::DiscreteState s;
  int* fields[3] = {&s.i, &s.j, &s.heading};
  std::size_t pos = 0;
  for (int n = 0; n < 3; ++n) {
    const auto end = text.find(',', pos);
    const bool last = n == 2;
    if ((end == std::string::npos) != last) {
      throw ms::ParseError(what, "expected i,j,heading");
    }
    const std::string token = text.substr(pos, last ? std::string::npos : end - pos);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), *fields[n]);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
      throw ms::ParseError(what, "expected i,j,heading");
    }
    pos = end + 1;
  }
  return s;
}

ms::ControlSet load_checked_control_set(const std::string& path) {
  auto cs = ms::parse_control_set(ms::read_text_file(path));
  const auto violations = ms::validate(cs);
  if (!violations.empty()) {
    std::cerr << path << ": control set is invalid\n";
    for (const auto& v : violations) {
      std::cerr << "  primitive " << v.primitive_id << ": " << v.message << '\n';
    }
    throw ExitWith{kExitInvalid};
  }
  return cs;
}

ms::MeshTables tables_for(const ms::ControlSet& cs, const std::string& cache) {
  auto cached = ms::load_or_build_tables(cs, cache);
  if (!cached.warning.empty()) std::cerr << "warning: " << cached.warning << '\n';
  return std::move(cached.tables);
}

void print_metrics(const ms::SearchMetrics& m) {
  std::cout << "expansions " << m.expansions << '\n'
            << "generated " << m.generated << '\n'
            << "collision_checks " << m.collision_checks << '\n'
            << "runtime_us "
            << std::chrono::duration_cast<std::chrono::microseconds>(m.runtime).count() << '\n';
}

// --- precompute -------------------------------------------------------------

struct PrecomputeArgs {
  std::string control_set;
  std::string out;
};

int run_precompute(const PrecomputeArgs& a) {
  const auto cs = load_checked_control_set(a.control_set);
  auto cached = ms::load_or_build_tables(cs, a.out);
  if (!cached.warning.empty()) std::cerr << "warning: " << cached.warning << '\n';
  std::cout << "config_count " << cached.tables.config_count() << '\n'
            << "soft_id_classes " << cached.tables.soft_class_count() << '\n'
            << (cached.cache_hit ? "cache hit: " : "cache written: ") << a.out << '\n';
  return kExitOk;
}

// --- plan -------------------------------------------------------------------

struct PlanArgs {
  std::string map;
  std::string control_set;
  std::string cache;
  std::string start;
  std::string goal;
  std::string algo = "mesh";
  double weight = 1.0;
  int k = 100;
  std::string svg;
  std::string trajectory_out;
};

int run_plan(const PlanArgs& a) {
  const auto grid = ms::parse_map(ms::read_text_file(a.map));
  const auto cs = load_checked_control_set(a.control_set);
  const auto algo = ms::parse_algorithm(a.algo);
  if (!algo) throw ms::ParseError("--algo", "unknown algorithm '" + a.algo + "'");
  const auto start = parse_state(a.start, "--start");
  const auto goal = parse_state(a.goal, "--goal");
  for (const auto& s : {start, goal}) {
    if (!grid.in_bounds(s.cell()) || s.heading < 0 || s.heading >= cs.heading_count()) {
      throw ms::ParseError("--start/--goal", "state outside the map or heading range");
    }
  }
  const bool mesh = *algo == ms::Algorithm::mesh || *algo == ms::Algorithm::mesh_pruning ||
                    *algo == ms::Algorithm::mesh_parall;
  ms::MeshTables tables;
  if (mesh) tables = tables_for(cs, a.cache);

  const ms::PlanRequest req{grid, cs, mesh ? &tables : nullptr, start, goal, a.weight};
  const auto result = ms::plan(*algo, req, a.k);
  std::cout << "algo " << ms::algorithm_name(*algo) << '\n' << "weight " << a.weight << '\n';
  if (!result.metrics.solved) {
    std::cout << "no path\n";
    print_metrics(result.metrics);
    return kExitNoPath;
  }
  std::cout << "solved\n"
            << "cost " << format_cost(*result.metrics.cost) << '\n'
            << "primitives " << result.trajectory->primitives.size() << '\n';
  print_metrics(result.metrics);
  if (auto v = ms::validate_trajectory(*result.trajectory, req)) {
    std::cerr << "trajectory failed validation: " << v->message << '\n';
    return kExitInvalid;
  }
  if (!a.svg.empty()) ms::write_text_file(a.svg, ms::render_svg(grid, cs, &*result.trajectory));
  if (!a.trajectory_out.empty()) {
    ms::write_text_file(a.trajectory_out, ms::save_trajectory(*result.trajectory));
  }
  return kExitOk;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::string out;
  std::string summary;
  int jobs = 1;
  bool quiet = false;
};

int run_bench(const BenchArgs& a) {
  const auto base = std::filesystem::path(a.config).parent_path().string();
  auto config = ms::parse_bench_config(ms::read_text_file(a.config), base);
  if (!a.out.empty()) config.output_path = a.out;
  if (config.output_path.empty()) throw ms::ParseError("--out", "no output path given");

  // Everything is read and validated before the first search runs.
  const auto inputs = ms::load_bench_inputs(config);
  std::cerr << inputs.instances.size() << " instances x " << config.algorithms.size()
            << " algorithms x " << config.weights.size() << " weights\n";
  std::size_t last_report = 0;
  const auto records = ms::run_bench(config, inputs, a.jobs, [&](std::size_t done, std::size_t total) {
    if (a.quiet) return;
    if (done == total || done - last_report >= std::max<std::size_t>(1, total / 20)) {
      last_report = done;
      std::cerr << "\r" << done << "/" << total << std::flush;
    }
  });
  if (!a.quiet) std::cerr << '\n';

  std::string csv = ms::csv_header() + "\n";
  for (const auto& r : records) csv += ms::to_csv_row(r) + "\n";
  ms::write_text_file(config.output_path, csv);

  const auto summary = ms::format_summary(ms::summarize(records));
  std::cout << summary;
  if (!a.summary.empty()) ms::write_text_file(a.summary, summary);
  return kExitOk;
}

// --- render -----------------------------------------------------------------

struct RenderArgs {
  std::string map;
  std::string control_set;
  std::string cache;
  std::string trajectory;
  std::string csv;
  int row = -1;
  std::string out;
  int cell_px = 8;
};

int run_render(const RenderArgs& a) {
  const auto grid = ms::parse_map(ms::read_text_file(a.map));
  const auto cs = load_checked_control_set(a.control_set);
  ms::Trajectory trajectory;
  if (!a.trajectory.empty()) {
    trajectory = ms::load_trajectory(ms::read_text_file(a.trajectory), cs);
  } else if (!a.csv.empty() && a.row >= 0) {
    // Bench rows store the query, not the path: re-plan it.
    const auto records = ms::parse_csv(ms::read_text_file(a.csv));
    if (std::size_t(a.row) >= records.size()) {
      throw ms::ParseError("--row", "CSV has only " + std::to_string(records.size()) + " rows");
    }
    const auto& r = records[std::size_t(a.row)];
    const auto tables = tables_for(cs, a.cache);
    const ms::PlanRequest req{grid, cs, &tables, r.start, r.goal, r.weight};
    const auto result = ms::plan(*ms::parse_algorithm(r.algo), req);
    if (!result.metrics.solved) {
      std::cout << "no path\n";
      return kExitNoPath;
    }
    trajectory = *result.trajectory;
  } else {
    throw ms::ParseError("render", "missing trajectory: give --trajectory or --csv with --row");
  }
  for (const auto& inst : trajectory.primitives) {
    for (const auto& c : inst.absolute_trace) {
      if (!grid.in_bounds(c)) throw ms::ParseError("trajectory", "trajectory leaves the map");
    }
  }
  ms::write_text_file(a.out, ms::render_svg(grid, cs, &trajectory, a.cell_px));
  return kExitOk;
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string preset = "desk";
  std::string out;
  int headings = 0;
  std::vector<int> straights;
  std::vector<double> radii;
  std::vector<int> turns;
  double cell_size = 1.0;
};

int run_generate(const GenerateArgs& a) {
  ms::ControlSet cs;
  if (a.preset == "toy2") {
    cs = ms::make_toy2();
  } else {
    ms::ArcGeneratorParams p;
    if (a.preset == "desk") {
      p = ms::desk_scale_params();
    } else if (a.preset == "full") {
      p = ms::full_scale_params();
    } else {
      throw ms::ParseError("--preset", "expected toy2, desk or full");
    }
    if (a.headings > 0) p.heading_count = a.headings;
    if (!a.straights.empty()) p.straight_lengths = a.straights;
    if (!a.radii.empty()) p.arc_radii = a.radii;
    if (!a.turns.empty()) p.turn_steps = a.turns;
    p.cell_size = a.cell_size;
    cs = ms::generate_arcs(p);
  }
  ms::write_text_file(a.out, ms::save_control_set(cs));
  std::cout << cs.size() << " primitives, " << cs.heading_count() << " headings, hash "
            << std::hex << ms::content_hash(cs) << std::dec << '\n';
  return kExitOk;
}

// --- genmap -----------------------------------------------------------------

struct GenmapArgs {
  std::string kind = "random";
  int width = 64;
  int height = 64;
  std::uint64_t seed = 1;
  double density = 0.2;
  int corridor = 3;
  int wall = 1;
  int room = 9;
  int door = 2;
  std::string out;
  std::string scen;
  int count = 100;
  double min_distance = 8.0;
};

int run_genmap(const GenmapArgs& a) {
  ms::OccupancyGrid grid;
  if (a.kind == "random") {
    grid = ms::random_grid(a.width, a.height, a.density, a.seed);
  } else if (a.kind == "maze") {
    grid = ms::maze_grid(a.width, a.height, a.corridor, a.wall, a.seed);
  } else if (a.kind == "rooms") {
    grid = ms::rooms_grid(a.width, a.height, a.room, a.door, a.seed);
  } else {
    throw ms::ParseError("--kind", "expected random, maze or rooms");
  }
  ms::write_text_file(a.out, ms::serialize_map(grid));
  std::cout << a.out << ": " << grid.width() << "x" << grid.height() << ", " << grid.free_count()
            << " free cells\n";
  if (!a.scen.empty()) {
    const auto name = std::filesystem::path(a.out).filename().string();
    const auto entries = ms::make_scenarios(grid, name, a.count, a.min_distance, a.seed + 1);
    ms::write_text_file(a.scen, ms::serialize_scen(entries));
    std::cout << a.scen << ": " << entries.size() << " entries\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MeshA* and lattice A* planners, precomputation and benchmark harness"};
  app.require_subcommand(1);

  PrecomputeArgs pre;
  auto* precompute = app.add_subcommand("precompute", "Number configurations and write the tables cache");
  precompute->add_option("--control-set", pre.control_set, "Control-set JSON")->required();
  precompute->add_option("--out", pre.out, "Tables cache file")->required();

  PlanArgs pl;
  auto* plan = app.add_subcommand("plan", "Plan a single query");
  plan->add_option("--map", pl.map, "MovingAI map file")->required();
  plan->add_option("--control-set", pl.control_set, "Control-set JSON")->required();
  plan->add_option("--cache", pl.cache, "Tables cache file (built if missing)");
  plan->add_option("--start", pl.start, "Start state i,j,heading")->required();
  plan->add_option("--goal", pl.goal, "Goal state i,j,heading")->required();
  plan->add_option("--algo", pl.algo, "lba | lazy_lba | mesh | mesh_pruning | mesh_parall");
  plan->add_option("--weight", pl.weight, "Heuristic weight (>= 1)");
  plan->add_option("--k", pl.k, "Pruning steps per lattice step for mesh_parall");
  plan->add_option("--svg", pl.svg, "Write an SVG rendering");
  plan->add_option("--trajectory-out", pl.trajectory_out, "Write the trajectory as JSON");

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
  bench->add_option("--config", be.config, "Bench config JSON")->required();
  bench->add_option("--out", be.out, "CSV output (overrides output_path)");
  bench->add_option("--summary", be.summary, "Also write the summary table here");
  bench->add_option("--jobs", be.jobs, "Worker threads; 1 gives serial timing");
  bench->add_flag("--quiet", be.quiet, "No progress output");

  RenderArgs re;
  auto* render = app.add_subcommand("render", "Render a trajectory as SVG");
  render->add_option("--map", re.map, "MovingAI map file")->required();
  render->add_option("--control-set", re.control_set, "Control-set JSON")->required();
  render->add_option("--cache", re.cache, "Tables cache file (for --csv rows)");
  render->add_option("--trajectory", re.trajectory, "Trajectory JSON");
  render->add_option("--csv", re.csv, "Bench CSV");
  render->add_option("--row", re.row, "0-based data row of --csv to re-plan and render");
  render->add_option("--out", re.out, "SVG output")->required();
  render->add_option("--cell-px", re.cell_px, "Pixels per cell");

  GenerateArgs ge;
  auto* generate = app.add_subcommand("generate", "Write a built-in control set");
  generate->add_option("--preset", ge.preset, "toy2 | desk | full");
  generate->add_option("--out", ge.out, "Control-set JSON")->required();
  generate->add_option("--headings", ge.headings, "Heading count (multiple of 8)");
  generate->add_option("--straights", ge.straights, "Straight lengths in lattice steps")->delimiter(',');
  generate->add_option("--radii", ge.radii, "Minimum turning radii in cells")->delimiter(',');
  generate->add_option("--turns", ge.turns, "Heading changes per radius")->delimiter(',');
  generate->add_option("--cell-size", ge.cell_size, "Cell size in length units");

  GenmapArgs gm;
  auto* genmap = app.add_subcommand("genmap", "Write a synthetic map (and scenarios) in MovingAI format");
  genmap->add_option("--kind", gm.kind, "random | maze | rooms");
  genmap->add_option("--width", gm.width);
  genmap->add_option("--height", gm.height);
  genmap->add_option("--seed", gm.seed);
  genmap->add_option("--density", gm.density, "random: blocked fraction");
  genmap->add_option("--corridor", gm.corridor, "maze: corridor width");
  genmap->add_option("--wall", gm.wall, "maze: wall thickness");
  genmap->add_option("--room", gm.room, "rooms: room side");
  genmap->add_option("--door", gm.door, "rooms: door width");
  genmap->add_option("--out", gm.out, "Map file")->required();
  genmap->add_option("--scen", gm.scen, "Scenario file");
  genmap->add_option("--count", gm.count, "Scenario entries");
  genmap->add_option("--min-distance", gm.min_distance, "Minimum start-goal distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (precompute->parsed()) return run_precompute(pre);
    if (plan->parsed()) return run_plan(pl);
    if (bench->parsed()) return run_bench(be);
    if (render->parsed()) return run_render(re);
    if (generate->parsed()) return run_generate(ge);
    if (genmap->parsed()) return run_genmap(gm);
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const ms::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ms::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitIo;
}
