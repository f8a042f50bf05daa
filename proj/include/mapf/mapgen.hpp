#pragma once

#include <cstdint>

#include "mapf/grid.hpp"

namespace mapf {

/// Each cell is independently an obstacle with probability `density`.
/// Disconnected layouts are allowed; instance sampling enforces reachability.
MapGrid gen_random(int width, int height, double density, std::uint64_t seed);

/// Randomized depth-first carving on the odd-coordinate lattice (1-cell
/// corridors), followed by independent removal of interior walls with
/// probability `loop_prob`. All free cells are connected.
MapGrid gen_maze(int width, int height, std::uint64_t seed, double loop_prob = 0.1);

struct WarehouseParams {
  int shelf_width = 8;
  int shelf_height = 3;
  int aisle_width = 1;
  int shelves_per_row = 5;
  int shelf_rows = 8;
  int border_margin = 1;

  int width() const noexcept {
    return 2 * border_margin + shelves_per_row * shelf_width + (shelves_per_row - 1) * aisle_width;
  }
  int height() const noexcept {
    return 2 * border_margin + shelf_rows * shelf_height + (shelf_rows - 1) * aisle_width;
  }
};

/// Rectangular shelf blocks separated by aisles inside a free border frame.
/// The defaults produce a 33 x 46 (rows x cols) layout.
MapGrid gen_warehouse(const WarehouseParams& params = {});

}  // namespace mapf
