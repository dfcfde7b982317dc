#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "meshastar/geometry.hpp"

namespace meshastar {

/// Immutable occupancy grid.
///
/// Cells are addressed as (i, j) = (column, row) with the origin at the
/// lower-left corner. MovingAI files store rows top-first, so file row `y`
/// maps to j = height - 1 - y. The original terrain characters are kept so
/// the map body can be written back unchanged.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;

  /// `terrain` holds width*height characters, rows top-first (file order).
  OccupancyGrid(int width, int height, std::string terrain);

  /// All-free grid.
  static OccupancyGrid empty(int width, int height);

  /// Builds a grid from rows listed top-first, one string per row.
  static OccupancyGrid from_rows(const std::vector<std::string>& rows_top_first);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool in_bounds(GridCell c) const noexcept {
    return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_;
  }

  /// Unchecked: caller guarantees in_bounds(c).
  bool blocked_unchecked(GridCell c) const noexcept {
    return blocked_[std::size_t(c.j) * std::size_t(width_) + std::size_t(c.i)] != 0;
  }

  char terrain_at(GridCell c) const;
  std::size_t free_count() const noexcept { return free_count_; }

  /// Copy with one cell's traversability changed (tests and generators).
  OccupancyGrid with_cell(GridCell c, bool blocked) const;

  const std::string& terrain() const noexcept { return terrain_; }

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.terrain_ == b.terrain_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::string terrain_;                // file order, rows top-first
  std::vector<std::uint8_t> blocked_;  // indexed by j * width + i
  std::size_t free_count_ = 0;
};

/// True for out-of-bounds or blocked cells. This is the unit of the
/// collision-check metric; planners count their calls to it.
inline bool is_blocked(const OccupancyGrid& grid, GridCell cell) noexcept {
  return !grid.in_bounds(cell) || grid.blocked_unchecked(cell);
}

bool is_free_terrain(char c);

/// Parses a MovingAI `.map` file. Throws ParseError naming the line.
OccupancyGrid parse_map(std::string_view text);

/// Writes the grid in MovingAI format (`type octile` header).
std::string serialize_map(const OccupancyGrid& grid);

struct ScenarioEntry {
  int bucket = 0;
  std::string map_name;
  int map_width = 0;
  int map_height = 0;
  GridCell start_cell;  // converted to lower-left origin
  GridCell goal_cell;
  double reference_length = 0.0;
};

/// Parses a MovingAI `.scen` file. Coordinates are converted to the
/// lower-left origin using each line's map height.
std::vector<ScenarioEntry> parse_scen(std::string_view text);

/// Writes entries back in MovingAI scenario format.
std::string serialize_scen(const std::vector<ScenarioEntry>& entries);

/// Throws ParseError when the entry does not fit the map.
void validate_entry(const ScenarioEntry& entry, const OccupancyGrid& grid, std::size_t index);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace meshastar
