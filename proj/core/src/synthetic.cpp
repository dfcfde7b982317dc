#include "meshastar/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "meshastar/errors.hpp"

namespace meshastar {

namespace {

class Canvas {
 public:
  Canvas(int width, int height, char fill)
      : width_(width), height_(height), cells_(std::size_t(width) * std::size_t(height), fill) {}

  void set(int i, int j, char c) {
    if (i >= 0 && j >= 0 && i < width_ && j < height_) cells_[index(i, j)] = c;
  }
  void fill_rect(int i0, int j0, int w, int h, char c) {
    for (int j = j0; j < j0 + h; ++j) {
      for (int i = i0; i < i0 + w; ++i) set(i, j, c);
    }
  }

  OccupancyGrid to_grid() const {
    std::string terrain;
    terrain.reserve(cells_.size());
    for (int y = 0; y < height_; ++y) {
      const int j = height_ - 1 - y;
      for (int i = 0; i < width_; ++i) terrain.push_back(cells_[index(i, j)]);
    }
    return OccupancyGrid(width_, height_, std::move(terrain));
  }

 private:
  std::size_t index(int i, int j) const { return std::size_t(j) * std::size_t(width_) + std::size_t(i); }

  int width_;
  int height_;
  std::string cells_;
};

}  // namespace

OccupancyGrid random_grid(int width, int height, double density, std::uint64_t seed) {
  Rng rng(seed);
  Canvas canvas(width, height, '.');
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      if (uniform01(rng) < density) canvas.set(i, j, '@');
    }
  }
  return canvas.to_grid();
}

OccupancyGrid maze_grid(int width, int height, int corridor, int wall, std::uint64_t seed) {
  if (corridor <= 0 || wall <= 0) throw ContractViolation("corridor and wall must be positive");
  const int pitch = corridor + wall;
  const int cols = (width - wall) / pitch;
  const int rows = (height - wall) / pitch;
  if (cols <= 0 || rows <= 0) throw ContractViolation("maze grid too small");

  Rng rng(seed);
  Canvas canvas(width, height, '@');
  auto carve_room = [&](int c, int r) {
    canvas.fill_rect(wall + c * pitch, wall + r * pitch, corridor, corridor, '.');
  };
  std::vector<std::uint8_t> visited(std::size_t(cols) * std::size_t(rows), 0);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  visited[0] = 1;
  carve_room(0, 0);
  constexpr int kDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!stack.empty()) {
    const auto [c, r] = stack.back();
    int options[4];
    int n = 0;
    for (int d = 0; d < 4; ++d) {
      const int nc = c + kDirs[d][0];
      const int nr = r + kDirs[d][1];
      if (nc >= 0 && nr >= 0 && nc < cols && nr < rows &&
          !visited[std::size_t(nr) * std::size_t(cols) + std::size_t(nc)]) {
        options[n++] = d;
      }
    }
    if (n == 0) {
      stack.pop_back();
      continue;
    }
    const int d = options[uniform_index(rng, std::uint64_t(n))];
    const int nc = c + kDirs[d][0];
    const int nr = r + kDirs[d][1];
    visited[std::size_t(nr) * std::size_t(cols) + std::size_t(nc)] = 1;
    carve_room(nc, nr);
    // Knock out the wall between the two rooms.
    const int i0 = wall + std::min(c, nc) * pitch;
    const int j0 = wall + std::min(r, nr) * pitch;
    if (kDirs[d][0] != 0) {
      canvas.fill_rect(i0 + corridor, j0, wall, corridor, '.');
    } else {
      canvas.fill_rect(i0, j0 + corridor, corridor, wall, '.');
    }
    stack.emplace_back(nc, nr);
  }
  return canvas.to_grid();
}

OccupancyGrid rooms_grid(int width, int height, int room, int door, std::uint64_t seed) {
  if (room <= door + 1) throw ContractViolation("rooms must be larger than their doors");
  Rng rng(seed);
  Canvas canvas(width, height, '.');
  for (int x = room; x < width; x += room + 1) canvas.fill_rect(x, 0, 1, height, '@');
  for (int y = room; y < height; y += room + 1) canvas.fill_rect(0, y, width, 1, '@');
  for (int x = room; x < width; x += room + 1) {
    for (int y0 = 0; y0 < height; y0 += room + 1) {
      const int at = y0 + 1 + int(uniform_index(rng, std::uint64_t(room - door - 1)));
      canvas.fill_rect(x, at, 1, door, '.');
    }
  }
  for (int y = room; y < height; y += room + 1) {
    for (int x0 = 0; x0 < width; x0 += room + 1) {
      const int at = x0 + 1 + int(uniform_index(rng, std::uint64_t(room - door - 1)));
      canvas.fill_rect(at, y, door, 1, '.');
    }
  }
  const int blobs = (width * height) / (room * room * 2);
  for (int b = 0; b < blobs; ++b) {
    const int w = 1 + int(uniform_index(rng, 3));
    const int h = 1 + int(uniform_index(rng, 3));
    const int i = int(uniform_index(rng, std::uint64_t(width)));
    const int j = int(uniform_index(rng, std::uint64_t(height)));
    canvas.fill_rect(i, j, w, h, '@');
  }
  return canvas.to_grid();
}

double octile_path_length(const OccupancyGrid& grid, GridCell start, GridCell goal) {
  if (is_blocked(grid, start) || is_blocked(grid, goal)) return -1.0;
  const std::size_t n = std::size_t(grid.width()) * std::size_t(grid.height());
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  auto idx = [&](GridCell c) { return std::size_t(c.j) * std::size_t(grid.width()) + std::size_t(c.i); };
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[idx(start)] = 0.0;
  queue.push({0.0, idx(start)});
  const double diag = std::sqrt(2.0);
  while (!queue.empty()) {
    const auto [d, at] = queue.top();
    queue.pop();
    if (d > dist[at]) continue;
    const GridCell c{int(at % std::size_t(grid.width())), int(at / std::size_t(grid.width()))};
    if (c == goal) return d;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const GridCell next{c.i + di, c.j + dj};
        if (is_blocked(grid, next)) continue;
        if (di != 0 && dj != 0 &&
            (is_blocked(grid, {c.i + di, c.j}) || is_blocked(grid, {c.i, c.j + dj}))) {
          continue;
        }
        const double nd = d + ((di != 0 && dj != 0) ? diag : 1.0);
        if (nd < dist[idx(next)]) {
          dist[idx(next)] = nd;
          queue.push({nd, idx(next)});
        }
      }
    }
  }
  return -1.0;
}

std::vector<ScenarioEntry> make_scenarios(const OccupancyGrid& grid, const std::string& map_name,
                                          int count, double min_distance, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GridCell> free_cells;
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) {
      if (!is_blocked(grid, {i, j})) free_cells.push_back({i, j});
    }
  }
  std::vector<ScenarioEntry> out;
  if (free_cells.size() < 2) return out;
  const int max_attempts = count * 200;
  for (int attempt = 0; attempt < max_attempts && int(out.size()) < count; ++attempt) {
    const auto s = free_cells[uniform_index(rng, free_cells.size())];
    const auto g = free_cells[uniform_index(rng, free_cells.size())];
    if (std::hypot(double(s.i - g.i), double(s.j - g.j)) < min_distance) continue;
    const double length = octile_path_length(grid, s, g);
    if (length < 0) continue;
    ScenarioEntry e;
    e.bucket = int(length / 4.0);
    e.map_name = map_name;
    e.map_width = grid.width();
    e.map_height = grid.height();
    e.start_cell = s;
    e.goal_cell = g;
    e.reference_length = length;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace meshastar
