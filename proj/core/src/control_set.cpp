#include "meshastar/control_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "meshastar/errors.hpp"

namespace meshastar {

using nlohmann::ordered_json;

ControlSet::ControlSet(int heading_count, std::vector<double> headings_degrees,
                       std::vector<MotionPrimitive> primitives)
    : heading_count_(heading_count),
      headings_degrees_(std::move(headings_degrees)),
      primitives_(std::move(primitives)) {
  by_heading_.resize(std::size_t(std::max(heading_count_, 0)));
  for (const auto& p : primitives_) {
    if (p.start_heading >= 0 && p.start_heading < heading_count_) {
      by_heading_[std::size_t(p.start_heading)].push_back(p.id);
    }
  }
  for (auto& ids : by_heading_) std::sort(ids.begin(), ids.end());
}

std::span<const int> ControlSet::outgoing(int heading) const noexcept {
  if (heading < 0 || heading >= heading_count_) return {};
  return by_heading_[std::size_t(heading)];
}

std::vector<Violation> validate(const ControlSet& cs) {
  std::vector<Violation> out;
  const int k = cs.heading_count();
  if (k <= 0) out.push_back({-1, "heading_count must be positive"});
  if (!cs.headings_degrees().empty() && int(cs.headings_degrees().size()) != k) {
    out.push_back({-1, "headings_degrees must list exactly heading_count angles"});
  }

  std::map<std::tuple<int, GridCell, int>, int> seen;
  for (std::size_t index = 0; index < cs.primitives().size(); ++index) {
    const auto& p = cs.primitives()[index];
    if (p.id != int(index)) {
      out.push_back({p.id, "primitive ids must be dense and in file order (expected " +
                               std::to_string(index) + ")"});
    }
    if (p.start_heading < 0 || p.start_heading >= k) {
      out.push_back({p.id, "start_heading out of range"});
    }
    if (p.end_heading < 0 || p.end_heading >= k) out.push_back({p.id, "end_heading out of range"});
    if (!(p.cost > 0.0) || !std::isfinite(p.cost)) out.push_back({p.id, "cost must be positive"});
    if (p.trace.size() < 2) {
      out.push_back({p.id, "trace must have at least two cells"});
    } else {
      if (p.trace.front() != GridCell{0, 0}) out.push_back({p.id, "trace must start at (0,0)"});
      if (p.trace.back() != p.end_offset) out.push_back({p.id, "trace must end at end_offset"});
      for (std::size_t c = 1; c < p.trace.size(); ++c) {
        if (p.trace[c] == p.trace[c - 1]) {
          out.push_back({p.id, "consecutive trace cells must differ (position " +
                                   std::to_string(c) + ")"});
          break;
        }
      }
    }
    const auto key = std::make_tuple(p.start_heading, p.end_offset, p.end_heading);
    if (auto [it, inserted] = seen.emplace(key, p.id); !inserted) {
      out.push_back({p.id, "duplicates primitive " + std::to_string(it->second) +
                               " (same start heading, end offset and end heading)"});
    }
  }
  return out;
}

namespace {

std::string field(const std::string& parent, const std::string& name) {
  return parent.empty() ? name : parent + "." + name;
}

const ordered_json& require(const ordered_json& obj, const std::string& parent, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(field(parent, key), "missing field");
  }
  return obj.at(key);
}

int require_int(const ordered_json& obj, const std::string& parent, const char* key) {
  const auto& v = require(obj, parent, key);
  if (!v.is_number_integer()) throw ParseError(field(parent, key), "expected integer");
  return v.get<int>();
}

GridCell parse_cell(const ordered_json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ParseError(path, "expected [i, j] integer pair");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

}  // namespace

ControlSet parse_control_set(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "control set must be a JSON object");

  const int k = require_int(doc, "", "heading_count");
  if (k <= 0) throw ParseError("heading_count", "must be positive");

  std::vector<double> degrees;
  if (doc.contains("headings_degrees")) {
    const auto& arr = doc.at("headings_degrees");
    if (!arr.is_array()) throw ParseError("headings_degrees", "expected array");
    for (std::size_t n = 0; n < arr.size(); ++n) {
      if (!arr[n].is_number()) {
        throw ParseError("headings_degrees[" + std::to_string(n) + "]", "expected number");
      }
      degrees.push_back(arr[n].get<double>());
    }
  }

  const auto& prims = require(doc, "", "primitives");
  if (!prims.is_array()) throw ParseError("primitives", "expected array");
  std::vector<MotionPrimitive> primitives;
  for (std::size_t n = 0; n < prims.size(); ++n) {
    const std::string path = "primitives[" + std::to_string(n) + "]";
    const auto& jp = prims[n];
    if (!jp.is_object()) throw ParseError(path, "expected object");
    MotionPrimitive p;
    p.id = require_int(jp, path, "id");
    p.start_heading = require_int(jp, path, "start_heading");
    p.end_heading = require_int(jp, path, "end_heading");
    if (p.start_heading < 0 || p.start_heading >= k) {
      throw ParseError(field(path, "start_heading"), "heading index must be in [0, heading_count)");
    }
    if (p.end_heading < 0 || p.end_heading >= k) {
      throw ParseError(field(path, "end_heading"), "heading index must be in [0, heading_count)");
    }
    p.end_offset = parse_cell(require(jp, path, "end_offset"), field(path, "end_offset"));
    const auto& trace = require(jp, path, "trace");
    if (!trace.is_array()) throw ParseError(field(path, "trace"), "expected array");
    for (std::size_t c = 0; c < trace.size(); ++c) {
      p.trace.push_back(parse_cell(trace[c], field(path, "trace[" + std::to_string(c) + "]")));
    }
    const auto& cost = require(jp, path, "cost");
    if (!cost.is_number()) throw ParseError(field(path, "cost"), "expected number");
    p.cost = cost.get<double>();
    if (!(p.cost > 0.0)) throw ParseError(field(path, "cost"), "must be positive");
    primitives.push_back(std::move(p));
  }

  return ControlSet(k, std::move(degrees), std::move(primitives));
}

ControlSet load_control_set(std::string_view json_text) {
  ControlSet cs = parse_control_set(json_text);
  if (auto violations = validate(cs); !violations.empty()) {
    const auto& v = violations.front();
    std::string where = "primitives";
    if (v.primitive_id >= 0) where += "[id=" + std::to_string(v.primitive_id) + "]";
    std::string message = v.message;
    if (violations.size() > 1) {
      message += " (+" + std::to_string(violations.size() - 1) + " more)";
    }
    throw ParseError(where, message);
  }
  return cs;
}

std::string save_control_set(const ControlSet& cs) {
  ordered_json doc;
  doc["heading_count"] = cs.heading_count();
  doc["headings_degrees"] = cs.headings_degrees();
  auto prims = ordered_json::array();
  for (const auto& p : cs.primitives()) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["start_heading"] = p.start_heading;
    jp["end_heading"] = p.end_heading;
    jp["end_offset"] = {p.end_offset.i, p.end_offset.j};
    auto trace = ordered_json::array();
    for (auto c : p.trace) trace.push_back({c.i, c.j});
    jp["trace"] = std::move(trace);
    jp["cost"] = p.cost;
    prims.push_back(std::move(jp));
  }
  doc["primitives"] = std::move(prims);
  return doc.dump(1) + "\n";
}

ControlSet make_toy2() {
  constexpr int E = 0;
  constexpr int N = 1;
  std::vector<MotionPrimitive> prims = {
      {0, E, E, {2, 0}, {{0, 0}, {1, 0}, {2, 0}}, 2.0},
      {1, E, N, {1, 1}, {{0, 0}, {1, 0}, {1, 1}}, 2.2},
      {2, N, N, {0, 2}, {{0, 0}, {0, 1}, {0, 2}}, 2.0},
      {3, N, E, {1, 1}, {{0, 0}, {0, 1}, {1, 1}}, 2.2},
  };
  return ControlSet(2, {0.0, 90.0}, std::move(prims));
}

std::vector<GridCell> rasterize(std::span<const Point2> polyline) {
  if (polyline.size() < 2) throw ContractViolation("rasterize needs at least two points");

  std::vector<GridCell> cells;
  auto emit = [&cells](GridCell c) {
    if (cells.empty() || cells.back() != c) cells.push_back(c);
  };

  constexpr double kTie = 1e-12;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
    const Point2 a = polyline[s];
    const Point2 b = polyline[s + 1];
    GridCell cell{int(std::floor(a.x)), int(std::floor(a.y))};
    const GridCell last{int(std::floor(b.x)), int(std::floor(b.y))};
    emit(cell);

    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    double t_max_x = kInf;
    double t_max_y = kInf;
    if (step_x != 0) t_max_x = ((step_x > 0 ? cell.i + 1.0 : double(cell.i)) - a.x) / dx;
    if (step_y != 0) t_max_y = ((step_y > 0 ? cell.j + 1.0 : double(cell.j)) - a.y) / dy;
    const double t_delta_x = step_x != 0 ? 1.0 / std::abs(dx) : kInf;
    const double t_delta_y = step_y != 0 ? 1.0 / std::abs(dy) : kInf;

    const int budget = 2 * (std::abs(last.i - cell.i) + std::abs(last.j - cell.j)) + 4;
    for (int guard = 0; cell != last && guard < budget; ++guard) {
      if (std::min(t_max_x, t_max_y) > 1.0 + kTie) break;
      if (std::abs(t_max_x - t_max_y) <= kTie) {
        // Exact corner crossing: both side cells are touched.
        emit({cell.i + step_x, cell.j});
        emit({cell.i, cell.j + step_y});
        cell = {cell.i + step_x, cell.j + step_y};
        t_max_x += t_delta_x;
        t_max_y += t_delta_y;
      } else if (t_max_x < t_max_y) {
        cell.i += step_x;
        t_max_x += t_delta_x;
      } else {
        cell.j += step_y;
        t_max_y += t_delta_y;
      }
      emit(cell);
    }
    if (cell != last) emit(last);
  }
  return cells;
}

namespace {

constexpr double kPi = std::numbers::pi;

double to_radians(double degrees) { return degrees * kPi / 180.0; }

/// Base lattice direction for each heading, counter-clockwise from east.
std::vector<GridCell> heading_directions(int heading_count) {
  const int q = heading_count / 8;
  std::vector<GridCell> octant;  // m = 0..q, angles 0..45 degrees
  for (int m = 0; m <= q; ++m) {
    const double target = (45.0 / q) * m;
    GridCell best{1, 0};
    double best_err = std::numeric_limits<double>::infinity();
    for (int a = 1; a <= q; ++a) {
      for (int b = 0; b <= a; ++b) {
        const double err = std::abs(std::atan2(double(b), double(a)) * 180.0 / kPi - target);
        if (err < best_err - 1e-12) {
          best_err = err;
          best = {a, b};
        }
      }
    }
    octant.push_back(best);
  }
  std::vector<GridCell> quadrant;  // 0..90 degrees exclusive of 90
  for (int h = 0; h < 2 * q; ++h) {
    quadrant.push_back(h <= q ? octant[std::size_t(h)]
                              : GridCell{octant[std::size_t(2 * q - h)].j,
                                         octant[std::size_t(2 * q - h)].i});
  }
  std::vector<GridCell> dirs;
  for (int rot = 0; rot < 4; ++rot) {
    for (auto v : quadrant) {
      for (int r = 0; r < rot; ++r) v = {-v.j, v.i};
      dirs.push_back(v);
    }
  }
  return dirs;
}

double normalize_degrees(double d) {
  d = std::fmod(d, 360.0);
  if (d < 0) d += 360.0;
  if (d >= 360.0 - 1e-12) d = 0.0;
  return d;
}

/// Signed heading change from a1 to a2 in (-180, 180].
double turn_angle(double a1_deg, double a2_deg) {
  double d = std::fmod(a2_deg - a1_deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

struct TurnSolution {
  double straight = 0.0;  // length of the initial straight run
  double radius = 0.0;
  double turn = 0.0;  // signed, radians
};

/// Straight run along a1 then a circular arc to a2 ending at `end` (cell units).
std::optional<TurnSolution> solve_turn(double a1_deg, double a2_deg, GridCell end) {
  const double a1 = to_radians(a1_deg);
  const double phi = to_radians(turn_angle(a1_deg, a2_deg));
  if (std::abs(phi) < 1e-12 || std::abs(phi) >= kPi - 1e-12) return std::nullopt;
  const double a2 = a1 + phi;
  const double sgn = phi > 0 ? 1.0 : -1.0;
  const double dx = std::cos(a1);
  const double dy = std::sin(a1);
  const double ax = sgn * (std::sin(a2) - std::sin(a1));
  const double ay = sgn * (std::cos(a1) - std::cos(a2));
  const double det = dx * ay - dy * ax;
  if (std::abs(det) < 1e-12) return std::nullopt;
  const double t = (end.i * ay - end.j * ax) / det;
  const double r = (dx * end.j - dy * end.i) / det;
  if (t < -1e-9 || r <= 1e-9) return std::nullopt;
  return TurnSolution{std::max(t, 0.0), r, phi};
}

std::vector<Point2> sample_turn(double a1_deg, const TurnSolution& s, GridCell end,
                                double spacing) {
  const double a1 = to_radians(a1_deg);
  std::vector<Point2> pts{{0.0, 0.0}};
  const double dx = std::cos(a1);
  const double dy = std::sin(a1);
  const int n_straight = int(std::ceil(s.straight / spacing));
  for (int n = 1; n <= n_straight; ++n) {
    const double t = s.straight * n / n_straight;
    pts.push_back({t * dx, t * dy});
  }
  const Point2 base = pts.back();
  const double sgn = s.turn > 0 ? 1.0 : -1.0;
  const Point2 center{base.x - sgn * s.radius * dy, base.y + sgn * s.radius * dx};
  const double start_angle = std::atan2(base.y - center.y, base.x - center.x);
  const int n_arc = std::max(2, int(std::ceil(std::abs(s.turn) * s.radius / spacing)));
  for (int n = 1; n <= n_arc; ++n) {
    const double ang = start_angle + s.turn * n / n_arc;
    pts.push_back({center.x + s.radius * std::cos(ang), center.y + s.radius * std::sin(ang)});
  }
  pts.back() = {double(end.i), double(end.j)};
  return pts;
}

std::vector<Point2> sample_straight(GridCell end, double spacing) {
  const double len = std::hypot(double(end.i), double(end.j));
  const int n = std::max(1, int(std::ceil(len / spacing)));
  std::vector<Point2> pts;
  for (int s = 0; s <= n; ++s) pts.push_back({end.i * double(s) / n, end.j * double(s) / n});
  return pts;
}

std::vector<GridCell> trace_of(const std::vector<Point2>& centerline) {
  std::vector<Point2> shifted;
  shifted.reserve(centerline.size());
  for (auto p : centerline) shifted.push_back({p.x + 0.5, p.y + 0.5});
  return rasterize(shifted);
}

}  // namespace

ControlSet generate_arcs(const ArcGeneratorParams& params) {
  const int k = params.heading_count;
  if (k <= 0 || k % 8 != 0) throw ContractViolation("heading_count must be a positive multiple of 8");
  if (!(params.cell_size > 0)) throw ContractViolation("cell_size must be positive");

  const auto dirs = heading_directions(k);
  std::vector<double> degrees;
  for (auto v : dirs) {
    degrees.push_back(normalize_degrees(std::atan2(double(v.j), double(v.i)) * 180.0 / kPi));
  }

  std::vector<MotionPrimitive> prims;
  std::vector<std::string> failures;
  for (int h = 0; h < k; ++h) {
    std::set<std::pair<GridCell, int>> used;  // (end offset, end heading)
    auto add = [&](int end_heading, GridCell end, double length, std::vector<GridCell> trace) {
      MotionPrimitive p;
      p.id = int(prims.size());
      p.start_heading = h;
      p.end_heading = end_heading;
      p.end_offset = end;
      p.trace = std::move(trace);
      p.cost = length * params.cell_size;
      used.insert({end, end_heading});
      prims.push_back(std::move(p));
    };

    for (int steps : params.straight_lengths) {
      if (steps <= 0) {
        failures.push_back("(heading " + std::to_string(h) + ", straight " +
                           std::to_string(steps) + ")");
        continue;
      }
      const GridCell end{dirs[std::size_t(h)].i * steps, dirs[std::size_t(h)].j * steps};
      if (used.contains({end, h})) {
        failures.push_back("(heading " + std::to_string(h) + ", straight " +
                           std::to_string(steps) + ") duplicates an earlier straight");
        continue;
      }
      add(h, end, std::hypot(double(end.i), double(end.j)), trace_of(sample_straight(end, 0.05)));
    }

    for (double radius : params.arc_radii) {
      for (int turn : params.turn_steps) {
        for (int side : {+1, -1}) {
          const int end_heading = ((h + side * turn) % k + k) % k;
          const double a1 = degrees[std::size_t(h)];
          const double a2 = degrees[std::size_t(end_heading)];
          const int bound = int(std::ceil(3.0 * radius)) + 4;
          std::optional<std::tuple<double, double, GridCell, TurnSolution>> best;
          for (int x = -bound; x <= bound; ++x) {
            for (int y = -bound; y <= bound; ++y) {
              const GridCell end{x, y};
              if (used.contains({end, end_heading})) continue;
              auto sol = solve_turn(a1, a2, end);
              if (!sol || sol->radius < radius - 1e-9) continue;
              const double length = sol->straight + sol->radius * std::abs(sol->turn);
              auto candidate = std::make_tuple(length, sol->straight, end, *sol);
              if (!best || std::tie(std::get<0>(candidate), std::get<1>(candidate)) <
                               std::tie(std::get<0>(*best), std::get<1>(*best))) {
                best = candidate;
              }
            }
          }
          if (!best) {
            failures.push_back("(heading " + std::to_string(h) + ", radius " +
                               std::to_string(radius) + ", turn " + std::to_string(side * turn) +
                               ")");
            continue;
          }
          const auto& [length, straight, end, sol] = *best;
          add(end_heading, end, length, trace_of(sample_turn(a1, sol, end, 0.05)));
        }
      }
    }
  }
  if (!failures.empty()) {
    std::string message = "no valid lattice snap for:";
    for (const auto& f : failures) message += " " + f;
    throw ContractViolation(message);
  }
  return ControlSet(k, std::move(degrees), std::move(prims));
}

std::vector<Point2> primitive_centerline(const ControlSet& cs, int primitive_id, double spacing) {
  const auto& p = cs.primitive(primitive_id);
  const auto& deg = cs.headings_degrees();
  if (int(deg.size()) != cs.heading_count()) return {};
  const double a1 = deg[std::size_t(p.start_heading)];
  const double a2 = deg[std::size_t(p.end_heading)];
  if (p.start_heading == p.end_heading) {
    const double dir = to_radians(a1);
    const double cross = std::cos(dir) * p.end_offset.j - std::sin(dir) * p.end_offset.i;
    if (std::abs(cross) > 1e-6) return {};
    return sample_straight(p.end_offset, spacing);
  }
  auto sol = solve_turn(a1, a2, p.end_offset);
  if (!sol) return {};
  return sample_turn(a1, *sol, p.end_offset, spacing);
}

ArcGeneratorParams full_scale_params() {
  ArcGeneratorParams p;
  p.heading_count = 16;
  p.straight_lengths = {1, 2, 3, 4};
  p.arc_radii = {2.0, 3.0, 4.0, 5.0, 6.0};
  p.turn_steps = {1, 2};
  return p;
}

ArcGeneratorParams desk_scale_params() {
  ArcGeneratorParams p;
  p.heading_count = 8;
  p.straight_lengths = {1, 2};
  p.arc_radii = {2.0};
  p.turn_steps = {1, 2};
  return p;
}

PrimitiveInstance instantiate(const MotionPrimitive& prim, DiscreteState at) {
  if (at.heading != prim.start_heading) {
    throw ContractViolation("primitive " + std::to_string(prim.id) + " starts at heading " +
                            std::to_string(prim.start_heading) + ", state has heading " +
                            std::to_string(at.heading));
  }
  PrimitiveInstance inst;
  inst.template_id = prim.id;
  inst.start_state = at;
  inst.end_state = {at.i + prim.end_offset.i, at.j + prim.end_offset.j, prim.end_heading};
  inst.absolute_trace.reserve(prim.trace.size());
  for (auto c : prim.trace) inst.absolute_trace.push_back(c + at.cell());
  inst.cost = prim.cost;
  return inst;
}

std::uint64_t content_hash(const ControlSet& cs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : save_control_set(cs)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace meshastar
