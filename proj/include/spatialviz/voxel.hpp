#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spatialviz/common.hpp"

namespace spatialviz {

struct Cell {
  int x = 0;
  int y = 0;
  int z = 0;
  auto operator<=>(const Cell&) const = default;
};

struct Dims {
  int x = 0;
  int y = 0;
  int z = 0;
  auto operator<=>(const Dims&) const = default;
};

/// Boolean voxel tensor indexed [z][y][x]. x points right, y back, z up.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  explicit OccupancyGrid(Dims dims);

  const Dims& dims() const { return dims_; }
  bool in_bounds(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < dims_.x && y < dims_.y && z < dims_.z;
  }
  bool in_bounds(const Cell& c) const { return in_bounds(c.x, c.y, c.z); }
  /// Out-of-bounds reads return false.
  bool at(int x, int y, int z) const;
  bool at(const Cell& c) const { return at(c.x, c.y, c.z); }
  void set(int x, int y, int z, bool v);
  void set(const Cell& c, bool v) { set(c.x, c.y, c.z, v); }

  int count() const;
  /// Occupied cells in z, y, x scan order.
  std::vector<Cell> cells() const;
  /// Column height map value: number of occupied cells in (x, y).
  int column_count(int x, int y) const;

  /// Compact text key "XxYxZ:bits", used for digests and comparisons.
  std::string key() const;

  static OccupancyGrid from_cells(Dims dims, const std::vector<Cell>& cells);
  /// Smallest grid holding the cells after translating them to the origin.
  static OccupancyGrid fit(const std::vector<Cell>& cells);

  bool operator==(const OccupancyGrid& other) const = default;

 private:
  Dims dims_{};
  std::vector<std::uint8_t> occ_;
  std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * dims_.y + y) * dims_.x + x;
  }
};

enum class Axis { X, Y, Z };
enum class View { Front, Top, Left, Right };

const char* to_string(View v);

/// Projection of a grid onto one orthographic view.
///
/// Front: rows are z (row 0 is the highest layer), columns x.
/// Top: rows are y (row 0 is the back row), columns x.
/// Left: rows are z, column c shows y = Y-1-c (viewer at -x looking +x).
/// Right: rows are z, column c shows y = c.
struct Silhouette {
  View view = View::Front;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> cells;

  bool at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c] != 0; }
  int column_sum(int c) const;
  int row_sum(int r) const;
  bool operator==(const Silhouette&) const = default;
};

struct CountBounds {
  int min_count = 0;
  int max_count = 0;
};

/// Bottom-up sweep; each cell is filled with probability p when grounded or
/// resting on an occupied cell.
OccupancyGrid create_supported_stack(Dims dims, double fill_probability, Rng& rng);

/// Joins the 8-connected regions of the ground layer by stepping diagonally,
/// then along an axis, between the closest cells of consecutive regions.
OccupancyGrid connect_isolated_regions(const OccupancyGrid& grid);

/// Quarter turns are counter-clockwise about the positive axis. The result is
/// re-translated so its bounding box starts at the origin.
OccupancyGrid rotate_stack(const OccupancyGrid& grid, Axis axis, int quarter_turns);

/// Reflects x (x -> X-1-x).
OccupancyGrid mirror_stack(const OccupancyGrid& grid);

Silhouette project_silhouette(const OccupancyGrid& grid, View view);

/// Min/max cube counts consistent with the front and top views and, when
/// given, the left view. Throws when the views disagree on which columns are
/// occupied.
CountBounds count_bounds(const Silhouette& front, const Silhouette& top,
                         const Silhouette* left = nullptr);

/// Splits a 6-connected stack into parts that are each 6-connected, sorted
/// by size. Throws after the resample budget.
std::vector<std::vector<Cell>> split_connected(const OccupancyGrid& grid, int max_part_cubes,
                                               int parts, Rng& rng);

OccupancyGrid create_pyramid_stack(Dims dims, Rng& rng);

struct ColoredCube {
  Cell pos;
  int color = 0;
  auto operator<=>(const ColoredCube&) const = default;
};

/// Colored occupancy with unique positions.
using BlockScene = std::vector<ColoredCube>;

/// Drops cubes in z-ascending order until each rests on the ground or a cube.
BlockScene settle(const BlockScene& scene);

// Predicates shared by the generators and the test oracles.
bool is_supported(const OccupancyGrid& grid);
bool is_supported(const BlockScene& scene);
bool is_connected6(const std::vector<Cell>& cells);
/// Number of 8-connected regions on the ground layer.
int ground_region_count(const OccupancyGrid& grid);

}  // namespace spatialviz
