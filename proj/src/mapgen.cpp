#include "mapf/mapgen.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "mapf/rng.hpp"

namespace mapf {

MapGrid gen_random(int width, int height, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density < 1.0)) throw std::invalid_argument("density must be in [0, 1)");
  if (width < 1 || height < 1) throw std::invalid_argument("map dimensions must be positive");
  CounterRng rng(seed, Stream::MapGeneration);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (auto& c : cells) c = rng.unit() < density ? 1 : 0;
  // A raster with no free cell is not a map; free one cell deterministically.
  bool any_free = false;
  for (auto c : cells) any_free = any_free || c == 0;
  if (!any_free) cells[rng.below(cells.size())] = 0;
  return MapGrid(width, height, std::move(cells), {}, MapFamily::Random);
}

MapGrid gen_maze(int width, int height, std::uint64_t seed, double loop_prob) {
  if (width < 3 || height < 3) throw std::invalid_argument("maze dimensions must be at least 3x3");
  if (!(loop_prob >= 0.0 && loop_prob <= 1.0)) throw std::invalid_argument("loop_prob must be in [0, 1]");
  CounterRng rng(seed, Stream::MapGeneration);
  const auto w = static_cast<std::size_t>(width);
  std::vector<std::uint8_t> cells(w * static_cast<std::size_t>(height), 1);
  auto at = [&](int r, int c) -> std::uint8_t& { return cells[static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)]; };

  // Lattice nodes sit at odd coordinates strictly inside the raster.
  const int node_rows = (height - 1) / 2;
  const int node_cols = (width - 1) / 2;
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(node_rows * node_cols), 0);
  auto node_id = [&](int nr, int nc) { return static_cast<std::size_t>(nr * node_cols + nc); };

  struct Node {
    int r;
    int c;
  };
  std::vector<Node> stack;
  const Node start{static_cast<int>(rng.below(static_cast<std::uint64_t>(node_rows))),
                   static_cast<int>(rng.below(static_cast<std::uint64_t>(node_cols)))};
  stack.push_back(start);
  visited[node_id(start.r, start.c)] = 1;
  at(2 * start.r + 1, 2 * start.c + 1) = 0;
  while (!stack.empty()) {
    const Node cur = stack.back();
    Node options[4];
    int count = 0;
    for (const Cell d : kNeighbourOffsets) {
      const int nr = cur.r + d.row;
      const int nc = cur.c + d.col;
      if (nr < 0 || nc < 0 || nr >= node_rows || nc >= node_cols || visited[node_id(nr, nc)]) continue;
      options[count++] = {nr, nc};
    }
    if (count == 0) {
      stack.pop_back();
      continue;
    }
    const Node next = options[rng.below(static_cast<std::uint64_t>(count))];
    visited[node_id(next.r, next.c)] = 1;
    at(2 * next.r + 1, 2 * next.c + 1) = 0;
    at(cur.r + next.r + 1, cur.c + next.c + 1) = 0;
    stack.push_back(next);
  }

  // Loops: knock out walls that separate two lattice nodes.
  if (loop_prob > 0.0) {
    for (int r = 1; r < height - 1; ++r) {
      for (int c = 1; c < width - 1; ++c) {
        if (at(r, c) == 0) continue;
        const bool horizontal = r % 2 == 1 && c % 2 == 0 && c + 1 <= 2 * node_cols - 1;
        const bool vertical = r % 2 == 0 && c % 2 == 1 && r + 1 <= 2 * node_rows - 1;
        if (!horizontal && !vertical) continue;
        if (rng.unit() < loop_prob) at(r, c) = 0;
      }
    }
  }
  return MapGrid(width, height, std::move(cells), {}, MapFamily::Maze);
}

MapGrid gen_warehouse(const WarehouseParams& p) {
  if (p.shelf_width < 1 || p.shelf_height < 1 || p.aisle_width < 1 || p.shelves_per_row < 1 || p.shelf_rows < 1 ||
      p.border_margin < 1) {
    throw std::invalid_argument("warehouse parameters must all be >= 1");
  }
  const int width = p.width();
  const int height = p.height();
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  for (int sr = 0; sr < p.shelf_rows; ++sr) {
    const int top = p.border_margin + sr * (p.shelf_height + p.aisle_width);
    for (int sc = 0; sc < p.shelves_per_row; ++sc) {
      const int left = p.border_margin + sc * (p.shelf_width + p.aisle_width);
      for (int r = top; r < top + p.shelf_height; ++r) {
        for (int c = left; c < left + p.shelf_width; ++c) {
          cells[static_cast<std::size_t>(r) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c)] = 1;
        }
      }
    }
  }
  MapGrid grid(width, height, std::move(cells), "warehouse", MapFamily::Warehouse);
  if (Components(grid).count() != 1) throw std::invalid_argument("warehouse parameters disconnect the free space");
  return grid;
}

}  // namespace mapf
