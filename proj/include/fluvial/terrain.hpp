/**
 * @file
 * @brief Tile grid data model: per-tile state, Von Neumann neighborhoods and
 * node geometry shared by every simulation phase.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluvial {

/// Raised when a caller violates an operation's preconditions.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Persistent per-tile state.
struct Tile {
  double offset_x = 0.5;  ///< node position inside the cell, [0,1]
  double offset_y = 0.5;
  double land_height = 0.0;
  double water_height = 0.0;  ///< >= 0
  double constraint_height = 0.0;
  double value_strength = 0.0;     ///< [0,1]
  double gradient_strength = 0.0;  ///< [0,1]
  double moisture = 0.0;           ///< >= 0
};

inline double total_height(const Tile& t) noexcept { return t.land_height + t.water_height; }

struct Coord {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Drainage directions. The enumerator order is also the tie-break order.
enum class Direction : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

inline constexpr std::array<Direction, 4> kDirections{Direction::North, Direction::East,
                                                      Direction::South, Direction::West};

constexpr Direction opposite(Direction d) noexcept {
  return static_cast<Direction>((static_cast<unsigned>(d) + 2U) % 4U);
}

constexpr int row_step(Direction d) noexcept {
  return d == Direction::North ? -1 : d == Direction::South ? 1 : 0;
}
constexpr int col_step(Direction d) noexcept {
  return d == Direction::West ? -1 : d == Direction::East ? 1 : 0;
}

struct NodePosition {
  double x = 0.0;
  double y = 0.0;
};

/// Rectangular row-major field of tiles plus global parameters.
class TileGrid {
public:
  TileGrid() = default;

  TileGrid(std::size_t width, std::size_t height, double spacing = 1.0, double sea_level = 0.0)
      : width_(width), height_(height), spacing_(spacing), sea_level_(sea_level),
        tiles_(width * height) {
    if (width == 0 || height == 0) throw UsageError("TileGrid: dimensions must be positive");
    if (!(spacing > 0.0)) throw UsageError("TileGrid: spacing must be > 0");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return tiles_.size(); }
  double spacing() const noexcept { return spacing_; }
  double sea_level() const noexcept { return sea_level_; }
  void set_sea_level(double z) noexcept { sea_level_ = z; }

  bool contains(Coord c) const noexcept { return c.row < height_ && c.col < width_; }

  std::size_t index(Coord c) const noexcept { return c.row * width_ + c.col; }
  Coord coord(std::size_t i) const noexcept { return {i / width_, i % width_}; }

  Tile& operator[](std::size_t i) noexcept { return tiles_[i]; }
  const Tile& operator[](std::size_t i) const noexcept { return tiles_[i]; }
  Tile& at(Coord c) {
    check(c);
    return tiles_[index(c)];
  }
  const Tile& at(Coord c) const {
    check(c);
    return tiles_[index(c)];
  }

  std::vector<Tile>& tiles() noexcept { return tiles_; }
  const std::vector<Tile>& tiles() const noexcept { return tiles_; }

  /// Index of the neighbor of tile `i` in direction `d`, if it lies on the grid.
  std::optional<std::size_t> neighbor(std::size_t i, Direction d) const noexcept {
    const std::size_t r = i / width_;
    const std::size_t c = i % width_;
    switch (d) {
      case Direction::North:
        if (r == 0) return std::nullopt;
        return i - width_;
      case Direction::South:
        if (r + 1 >= height_) return std::nullopt;
        return i + width_;
      case Direction::West:
        if (c == 0) return std::nullopt;
        return i - 1;
      case Direction::East:
        if (c + 1 >= width_) return std::nullopt;
        return i + 1;
    }
    return std::nullopt;
  }

  /// Neighbor of `i` in direction `d` without bounds checking.
  std::size_t step(std::size_t i, Direction d) const noexcept {
    switch (d) {
      case Direction::North: return i - width_;
      case Direction::South: return i + width_;
      case Direction::West: return i - 1;
      case Direction::East: return i + 1;
    }
    return i;
  }

  /// Bit d set when the neighbor in direction d lies on the grid.
  std::uint8_t neighbor_mask(std::size_t row, std::size_t col) const noexcept {
    std::uint8_t m = 0;
    if (row > 0) m |= 1U << static_cast<unsigned>(Direction::North);
    if (col + 1 < width_) m |= 1U << static_cast<unsigned>(Direction::East);
    if (row + 1 < height_) m |= 1U << static_cast<unsigned>(Direction::South);
    if (col > 0) m |= 1U << static_cast<unsigned>(Direction::West);
    return m;
  }

  NodePosition node(std::size_t i) const noexcept {
    const Tile& t = tiles_[i];
    return {(static_cast<double>(i % width_) + t.offset_x) * spacing_,
            (static_cast<double>(i / width_) + t.offset_y) * spacing_};
  }

  void check(Coord c) const {
    if (!contains(c))
      throw UsageError("tile (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                       ") outside " + std::to_string(height_) + "x" + std::to_string(width_) +
                       " grid");
  }

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  double spacing_ = 1.0;
  double sea_level_ = 0.0;
  std::vector<Tile> tiles_;
};

/// In-bounds Von Neumann neighbors in N, E, S, W order.
inline std::vector<Coord> neighbors(const TileGrid& grid, Coord c) {
  grid.check(c);
  std::vector<Coord> out;
  out.reserve(4);
  const std::size_t i = grid.index(c);
  for (Direction d : kDirections)
    if (auto n = grid.neighbor(i, d)) out.push_back(grid.coord(*n));
  return out;
}

namespace detail {

// Distance between the nodes of tiles a and b whose cells are (dcol, drow) apart.
// Grouping the offset difference keeps the result symmetric in a and b.
inline double offset_distance(const Tile& a, const Tile& b, double dcol, double drow,
                              double spacing) noexcept {
  const double dx = (dcol + (b.offset_x - a.offset_x)) * spacing;
  const double dy = (drow + (b.offset_y - a.offset_y)) * spacing;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace detail

/// Euclidean distance between two tile nodes. Zero for distinct tiles means the
/// nodes coincide; callers treat the gradient as infinite toward the lower tile.
inline double node_distance(const TileGrid& grid, std::size_t a, std::size_t b) noexcept {
  const std::size_t w = grid.width();
  const double dcol = static_cast<double>(b % w) - static_cast<double>(a % w);
  const double drow = static_cast<double>(b / w) - static_cast<double>(a / w);
  return detail::offset_distance(grid[a], grid[b], dcol, drow, grid.spacing());
}

inline double node_distance(const TileGrid& grid, Coord a, Coord b) {
  grid.check(a);
  grid.check(b);
  return node_distance(grid, grid.index(a), grid.index(b));
}

/// Distance from the node of tile `i` to that of its neighbor in direction `d`.
/// Requires the neighbor to exist.
inline double neighbor_distance(const TileGrid& grid, std::size_t i, Direction d) noexcept {
  return detail::offset_distance(grid[i], grid[grid.step(i, d)], col_step(d), row_step(d),
                                 grid.spacing());
}

/// Gradient of total height from tile `from` down to `to`. Coincident nodes give
/// +inf when `to` is strictly lower and 0 otherwise.
inline double descent_gradient(const TileGrid& grid, std::size_t from, std::size_t to) noexcept {
  const double drop = total_height(grid[from]) - total_height(grid[to]);
  const double dist = node_distance(grid, from, to);
  if (dist == 0.0) return drop > 0.0 ? INFINITY : 0.0;
  return drop / dist;
}

}  // namespace fluvial
