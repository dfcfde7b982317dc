#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>

namespace meshastar {

/// Integer grid cell: i is the column (east), j is the row (north).
/// Also used for relative offsets, which may be negative.
struct GridCell {
  int i = 0;
  int j = 0;

  friend constexpr auto operator<=>(const GridCell&, const GridCell&) = default;
  friend constexpr GridCell operator+(GridCell a, GridCell b) { return {a.i + b.i, a.j + b.j}; }
  friend constexpr GridCell operator-(GridCell a, GridCell b) { return {a.i - b.i, a.j - b.j}; }
  friend std::ostream& operator<<(std::ostream& os, GridCell c) {
    return os << '(' << c.i << ',' << c.j << ')';
  }
};

/// Lattice vertex (i, j, heading index).
struct DiscreteState {
  int i = 0;
  int j = 0;
  int heading = 0;

  constexpr GridCell cell() const { return {i, j}; }

  friend constexpr auto operator<=>(const DiscreteState&, const DiscreteState&) = default;
  friend std::ostream& operator<<(std::ostream& os, const DiscreteState& s) {
    return os << '(' << s.i << ',' << s.j << ',' << s.heading << ')';
  }
};

namespace detail {
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33U;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33U;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33U;
  return x;
}
}  // namespace detail

struct GridCellHash {
  std::size_t operator()(GridCell c) const noexcept {
    return detail::mix64((std::uint64_t(std::uint32_t(c.i)) << 32U) | std::uint32_t(c.j));
  }
};

struct DiscreteStateHash {
  std::size_t operator()(const DiscreteState& s) const noexcept {
    return detail::mix64((std::uint64_t(std::uint32_t(s.i)) << 32U) | std::uint32_t(s.j)) ^
           detail::mix64(std::uint64_t(std::uint32_t(s.heading)) + 0x9e3779b97f4a7c15ULL);
  }
};

}  // namespace meshastar
