#include "mapf/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace mapf {

std::string_view to_string(MapFamily family) noexcept {
  switch (family) {
    case MapFamily::Random: return "random";
    case MapFamily::Maze: return "maze";
    case MapFamily::Warehouse: return "warehouse";
    case MapFamily::Imported: return "imported";
    case MapFamily::Custom: return "custom";
  }
  return "custom";
}

MapFamily map_family_from_string(std::string_view text) {
  if (text == "random") return MapFamily::Random;
  if (text == "maze") return MapFamily::Maze;
  if (text == "warehouse") return MapFamily::Warehouse;
  if (text == "imported") return MapFamily::Imported;
  if (text == "custom") return MapFamily::Custom;
  throw std::invalid_argument("unknown map family '" + std::string(text) + "'");
}

MapGrid::MapGrid(int width, int height, std::vector<std::uint8_t> cells, std::string name,
                 MapFamily family)
    : width_(width), height_(height), cells_(std::move(cells)), name_(std::move(name)), family_(family) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("map dimensions must be positive");
  }
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("map raster length does not match width x height");
  }
  for (auto& c : cells_) {
    c = c != 0 ? 1 : 0;
  }
  free_count_ = static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{0}));
  if (free_count_ == 0) {
    throw std::invalid_argument("map has no free cells");
  }
}

std::vector<Cell> MapGrid::free_cells() const {
  std::vector<Cell> out;
  out.reserve(free_count_);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] == 0) out.push_back(cell_at(i));
  }
  return out;
}

MapGrid MapGrid::renamed(std::string name, MapFamily family) const {
  MapGrid copy = *this;
  copy.name_ = std::move(name);
  copy.family_ = family;
  return copy;
}

Components::Components(const MapGrid& grid) : labels_(grid.size(), kBlocked) {
  std::vector<std::uint32_t> queue;
  queue.reserve(grid.size());
  const auto cells = grid.cells();
  for (std::size_t seed = 0; seed < grid.size(); ++seed) {
    if (cells[seed] != 0 || labels_[seed] != kBlocked) continue;
    const auto label = static_cast<std::int32_t>(members_.size());
    queue.clear();
    queue.push_back(static_cast<std::uint32_t>(seed));
    labels_[seed] = label;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Cell c = grid.cell_at(queue[head]);
      for (const Cell d : kNeighbourOffsets) {
        const Cell n{c.row + d.row, c.col + d.col};
        if (!grid.passable(n)) continue;
        const auto ni = grid.index(n);
        if (labels_[ni] != kBlocked) continue;
        labels_[ni] = label;
        queue.push_back(static_cast<std::uint32_t>(ni));
      }
    }
    std::sort(queue.begin(), queue.end());
    members_.push_back(queue);
  }
}

}  // namespace mapf
