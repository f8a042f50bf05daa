#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mapf {

struct Cell {
  int row = 0;
  int col = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

enum class MapFamily { Random, Maze, Warehouse, Imported, Custom };

std::string_view to_string(MapFamily family) noexcept;
MapFamily map_family_from_string(std::string_view text);

/// Immutable obstacle raster. Cells are stored row-major, 1 = obstacle.
/// Equality compares the raster only; name and family are metadata.
class MapGrid {
 public:
  MapGrid(int width, int height, std::vector<std::uint8_t> cells, std::string name = {},
          MapFamily family = MapFamily::Custom);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const std::string& name() const noexcept { return name_; }
  MapFamily family() const noexcept { return family_; }
  std::span<const std::uint8_t> cells() const noexcept { return cells_; }

  bool in_bounds(Cell c) const noexcept {
    return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t index) const noexcept {
    return {static_cast<int>(index / static_cast<std::size_t>(width_)),
            static_cast<int>(index % static_cast<std::size_t>(width_))};
  }
  bool blocked(Cell c) const noexcept { return cells_[index(c)] != 0; }
  /// True for in-bounds free cells.
  bool passable(Cell c) const noexcept { return in_bounds(c) && cells_[index(c)] == 0; }

  std::size_t free_count() const noexcept { return free_count_; }
  std::vector<Cell> free_cells() const;

  MapGrid renamed(std::string name, MapFamily family) const;

  friend bool operator==(const MapGrid& a, const MapGrid& b) noexcept {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
  std::string name_;
  MapFamily family_;
  std::size_t free_count_ = 0;
};

/// Four-connected neighbours of a cell in UP, DOWN, LEFT, RIGHT order.
inline constexpr Cell kNeighbourOffsets[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

/// Connected components of the free cells (4-connectivity).
class Components {
 public:
  static constexpr std::int32_t kBlocked = -1;

  explicit Components(const MapGrid& grid);

  std::int32_t label(std::size_t cell_index) const noexcept { return labels_[cell_index]; }
  std::size_t count() const noexcept { return members_.size(); }
  /// Cell indices of one component in ascending order.
  std::span<const std::uint32_t> members(std::int32_t label) const noexcept {
    return members_[static_cast<std::size_t>(label)];
  }

 private:
  std::vector<std::int32_t> labels_;
  std::vector<std::vector<std::uint32_t>> members_;
};

}  // namespace mapf
