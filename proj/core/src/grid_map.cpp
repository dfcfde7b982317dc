#include "meshastar/grid_map.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "meshastar/errors.hpp"

namespace meshastar {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string line_label(std::size_t zero_based) { return "line " + std::to_string(zero_based + 1); }

template <typename T>
T parse_number(std::string_view token, const std::string& where, const char* what) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(where, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

int parse_header_value(std::string_view line, std::string_view key, std::size_t index) {
  line = trim(line);
  if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
      (line[key.size()] != ' ' && line[key.size()] != '\t')) {
    throw ParseError(line_label(index), "expected '" + std::string(key) + " <n>'");
  }
  const int value = parse_number<int>(trim(line.substr(key.size())), line_label(index), "integer");
  if (value <= 0) throw ParseError(line_label(index), std::string(key) + " must be positive");
  return value;
}

bool is_known_terrain(char c) {
  switch (c) {
    case '.': case 'G': case 'S':
    case '@': case 'O': case 'T': case 'W':
      return true;
    default:
      return false;
  }
}

}  // namespace

bool is_free_terrain(char c) { return c == '.' || c == 'G' || c == 'S'; }

OccupancyGrid::OccupancyGrid(int width, int height, std::string terrain)
    : width_(width), height_(height), terrain_(std::move(terrain)) {
  if (width <= 0 || height <= 0) throw ContractViolation("grid dimensions must be positive");
  if (terrain_.size() != std::size_t(width) * std::size_t(height)) {
    throw ContractViolation("terrain size does not match grid dimensions");
  }
  blocked_.assign(terrain_.size(), 0);
  for (int y = 0; y < height_; ++y) {
    const int j = height_ - 1 - y;
    for (int i = 0; i < width_; ++i) {
      const char c = terrain_[std::size_t(y) * std::size_t(width_) + std::size_t(i)];
      if (!is_known_terrain(c)) throw ContractViolation(std::string("unknown terrain '") + c + "'");
      const bool blocked = !is_free_terrain(c);
      blocked_[std::size_t(j) * std::size_t(width_) + std::size_t(i)] = blocked ? 1 : 0;
      if (!blocked) ++free_count_;
    }
  }
}

OccupancyGrid OccupancyGrid::empty(int width, int height) {
  return OccupancyGrid(width, height, std::string(std::size_t(width) * std::size_t(height), '.'));
}

OccupancyGrid OccupancyGrid::from_rows(const std::vector<std::string>& rows_top_first) {
  if (rows_top_first.empty()) throw ContractViolation("grid needs at least one row");
  const auto width = rows_top_first.front().size();
  std::string terrain;
  for (const auto& row : rows_top_first) {
    if (row.size() != width) throw ContractViolation("ragged grid rows");
    terrain += row;
  }
  return OccupancyGrid(int(width), int(rows_top_first.size()), std::move(terrain));
}

char OccupancyGrid::terrain_at(GridCell c) const {
  if (!in_bounds(c)) throw ContractViolation("cell out of bounds");
  const int y = height_ - 1 - c.j;
  return terrain_[std::size_t(y) * std::size_t(width_) + std::size_t(c.i)];
}

OccupancyGrid OccupancyGrid::with_cell(GridCell c, bool blocked) const {
  if (!in_bounds(c)) throw ContractViolation("cell out of bounds");
  std::string terrain = terrain_;
  const int y = height_ - 1 - c.j;
  terrain[std::size_t(y) * std::size_t(width_) + std::size_t(c.i)] = blocked ? '@' : '.';
  return OccupancyGrid(width_, height_, std::move(terrain));
}

OccupancyGrid parse_map(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < 4) throw ParseError(line_label(lines.size()), "truncated map header");

  auto type_line = trim(lines[0]);
  if (type_line.substr(0, 5) != "type " && type_line.substr(0, 5) != "type\t") {
    throw ParseError(line_label(0), "expected 'type <name>'");
  }
  const int height = parse_header_value(lines[1], "height", 1);
  const int width = parse_header_value(lines[2], "width", 2);
  if (trim(lines[3]) != "map") throw ParseError(line_label(3), "expected 'map'");

  std::string terrain;
  terrain.reserve(std::size_t(width) * std::size_t(height));
  for (int y = 0; y < height; ++y) {
    const std::size_t index = 4 + std::size_t(y);
    if (index >= lines.size()) {
      throw ParseError(line_label(index), "expected " + std::to_string(height) +
                                              " map rows, found " + std::to_string(y));
    }
    const auto row = lines[index];
    if (row.size() != std::size_t(width)) {
      throw ParseError(line_label(index), "row has " + std::to_string(row.size()) +
                                              " cells, header width is " + std::to_string(width));
    }
    for (char c : row) {
      if (!is_known_terrain(c)) {
        throw ParseError(line_label(index), std::string("unknown cell character '") + c + "'");
      }
    }
    terrain.append(row);
  }
  for (std::size_t index = 4 + std::size_t(height); index < lines.size(); ++index) {
    if (!trim(lines[index]).empty()) {
      throw ParseError(line_label(index), "extra content after " + std::to_string(height) +
                                              " map rows");
    }
  }
  return OccupancyGrid(width, height, std::move(terrain));
}

std::string serialize_map(const OccupancyGrid& grid) {
  std::string out = "type octile\nheight " + std::to_string(grid.height()) + "\nwidth " +
                    std::to_string(grid.width()) + "\nmap\n";
  const auto& terrain = grid.terrain();
  for (int y = 0; y < grid.height(); ++y) {
    out.append(terrain, std::size_t(y) * std::size_t(grid.width()), std::size_t(grid.width()));
    out.push_back('\n');
  }
  return out;
}

std::vector<ScenarioEntry> parse_scen(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]).substr(0, 8) != "version ") {
    throw ParseError(line_label(0), "missing 'version' line");
  }
  std::vector<ScenarioEntry> entries;
  for (std::size_t index = 1; index < lines.size(); ++index) {
    const auto line = lines[index];
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      auto end = line.find('\t', pos);
      if (end == std::string_view::npos) end = line.size();
      fields.push_back(trim(line.substr(pos, end - pos)));
      pos = end + 1;
    }
    if (fields.size() != 9) {
      throw ParseError(line_label(index),
                       "expected 9 tab-separated columns, found " + std::to_string(fields.size()));
    }
    const auto where = line_label(index);
    ScenarioEntry e;
    e.bucket = parse_number<int>(fields[0], where, "bucket");
    e.map_name = std::string(fields[1]);
    e.map_width = parse_number<int>(fields[2], where, "map width");
    e.map_height = parse_number<int>(fields[3], where, "map height");
    const int sx = parse_number<int>(fields[4], where, "start x");
    const int sy = parse_number<int>(fields[5], where, "start y");
    const int gx = parse_number<int>(fields[6], where, "goal x");
    const int gy = parse_number<int>(fields[7], where, "goal y");
    e.reference_length = parse_number<double>(fields[8], where, "optimal length");
    if (e.map_width <= 0 || e.map_height <= 0) throw ParseError(where, "map size must be positive");
    e.start_cell = {sx, e.map_height - 1 - sy};
    e.goal_cell = {gx, e.map_height - 1 - gy};
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string serialize_scen(const std::vector<ScenarioEntry>& entries) {
  std::ostringstream out;
  out << "version 1\n";
  out.precision(8);
  for (const auto& e : entries) {
    out << e.bucket << '\t' << e.map_name << '\t' << e.map_width << '\t' << e.map_height << '\t'
        << e.start_cell.i << '\t' << (e.map_height - 1 - e.start_cell.j) << '\t' << e.goal_cell.i
        << '\t' << (e.map_height - 1 - e.goal_cell.j) << '\t' << std::fixed << e.reference_length
        << '\n';
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

void validate_entry(const ScenarioEntry& entry, const OccupancyGrid& grid, std::size_t index) {
  const std::string where = "scenario entry " + std::to_string(index);
  if (entry.map_width != grid.width() || entry.map_height != grid.height()) {
    throw ParseError(where, "declared map size does not match the map");
  }
  if (!grid.in_bounds(entry.start_cell)) throw ParseError(where, "start outside the map");
  if (!grid.in_bounds(entry.goal_cell)) throw ParseError(where, "goal outside the map");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(contents.data(), std::streamsize(contents.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace meshastar
