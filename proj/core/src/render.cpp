#include "meshastar/render.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "meshastar/errors.hpp"

namespace meshastar {

namespace {

// Fixed-precision formatting keeps the output independent of stream state.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const OccupancyGrid& grid, const ControlSet& cs,
                       const Trajectory* trajectory, int cell_px) {
  const int w = grid.width();
  const int h = grid.height();
  const double px = cell_px;
  // Cell (i, j) has its lower-left corner at (i, j); SVG y grows downwards.
  auto sx = [&](double x) { return num(x * px); };
  auto sy = [&](double y) { return num((h - y) * px); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * cell_px << "\" height=\""
      << h * cell_px << "\" viewBox=\"0 0 " << w * cell_px << ' ' << h * cell_px << "\">\n";
  out << "<style>.blocked{fill:#333}.swept{fill:#9cf;fill-opacity:0.6}"
         ".prim{fill:none;stroke:#c00;stroke-width:1.5}.start{fill:#0a0}.goal{fill:#a0a}</style>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << w * cell_px << "\" height=\"" << h * cell_px
      << "\" fill=\"#fff\"/>\n";
  for (int j = h - 1; j >= 0; --j) {
    for (int i = 0; i < w; ++i) {
      if (grid.blocked_unchecked({i, j})) {
        out << "<rect class=\"blocked\" x=\"" << sx(i) << "\" y=\"" << sy(j + 1) << "\" width=\""
            << cell_px << "\" height=\"" << cell_px << "\"/>\n";
      }
    }
  }
  if (trajectory != nullptr && !trajectory->empty()) {
    for (const auto& c : trajectory->collision_trace) {
      out << "<rect class=\"swept\" x=\"" << sx(c.i) << "\" y=\"" << sy(c.j + 1) << "\" width=\""
          << cell_px << "\" height=\"" << cell_px << "\"/>\n";
    }
    for (const auto& inst : trajectory->primitives) {
      auto line = primitive_centerline(cs, inst.template_id, 0.1);
      const double ox = inst.start_state.i + 0.5;
      const double oy = inst.start_state.j + 0.5;
      out << "<polyline class=\"prim\" data-id=\"" << inst.template_id << "\" points=\"";
      bool first = true;
      auto point = [&](double x, double y) {
        out << (first ? "" : " ") << sx(x) << ',' << sy(y);
        first = false;
      };
      if (!line.empty()) {
        for (const auto& p : line) point(ox + p.x, oy + p.y);
      } else {
        for (const auto& c : inst.absolute_trace) point(c.i + 0.5, c.j + 0.5);
      }
      out << "\"/>\n";
    }
    const auto& s = trajectory->primitives.front().start_state;
    const auto& g = trajectory->primitives.back().end_state;
    out << "<circle class=\"start\" cx=\"" << sx(s.i + 0.5) << "\" cy=\"" << sy(s.j + 0.5)
        << "\" r=\"" << num(px * 0.4) << "\"/>\n";
    out << "<circle class=\"goal\" cx=\"" << sx(g.i + 0.5) << "\" cy=\"" << sy(g.j + 0.5)
        << "\" r=\"" << num(px * 0.4) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string save_trajectory(const Trajectory& t) {
  using nlohmann::ordered_json;
  auto state = [](const DiscreteState& s) { return ordered_json::array({s.i, s.j, s.heading}); };
  ordered_json doc;
  if (!t.empty()) {
    doc["start"] = state(t.primitives.front().start_state);
    doc["goal"] = state(t.primitives.back().end_state);
  }
  doc["cost"] = t.total_cost;
  doc["primitives"] = ordered_json::array();
  for (const auto& p : t.primitives) {
    doc["primitives"].push_back({{"id", p.template_id}, {"start", state(p.start_state)}});
  }
  return doc.dump(1) + "\n";
}

Trajectory load_trajectory(std::string_view json_text, const ControlSet& cs) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("invalid trajectory JSON: ") + e.what());
  }
  std::vector<PrimitiveInstance> instances;
  try {
    const auto& prims = doc.at("primitives");
    for (std::size_t n = 0; n < prims.size(); ++n) {
      const std::string where = "primitives[" + std::to_string(n) + "]";
      const int id = prims[n].at("id").get<int>();
      const auto s = prims[n].at("start").get<std::vector<int>>();
      if (id < 0 || std::size_t(id) >= cs.size()) throw ParseError(where + ".id", "unknown primitive");
      if (s.size() != 3) throw ParseError(where + ".start", "expected [i, j, heading]");
      const auto& prim = cs.primitive(id);
      if (prim.start_heading != s[2]) throw ParseError(where + ".start", "heading mismatch");
      instances.push_back(instantiate(prim, DiscreteState{s[0], s[1], s[2]}));
    }
  } catch (const json::exception& e) {
    throw ParseError("", std::string("malformed trajectory: ") + e.what());
  }
  return make_trajectory(std::move(instances));
}

}  // namespace meshastar
