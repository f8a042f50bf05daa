// Reference implementations used only by tests. They follow the written
// rules literally and share no code with the library.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "mapf/core.hpp"

namespace oracle {

using mapf::Cell;
using mapf::CollisionSystem;
using mapf::MapGrid;

struct Resolution {
  std::vector<Cell> positions;
  std::int64_t obstacle = 0;
  std::int64_t vertex = 0;
  std::int64_t edge = 0;
};

inline bool free_cell(const MapGrid& g, Cell c) {
  return c.row >= 0 && c.col >= 0 && c.row < g.height() && c.col < g.width() && g.cells()[c.row * g.width() + c.col] == 0;
}

// Conflict enumeration straight from the rules: obstacle waits, then
// repeated rounds of a vertex pass (all decisions on the round's snapshot)
// followed by an edge pass, until nothing changes.
inline Resolution resolve(const std::vector<Cell>& pos, const std::vector<Cell>& want, const MapGrid& g,
                          const std::vector<bool>& active, CollisionSystem mode) {
  const std::size_t n = pos.size();
  Resolution r;
  std::vector<Cell> target(n);
  std::vector<bool> moves(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = pos[i];
    if (!active[i] || want[i] == pos[i]) continue;
    if (!free_cell(g, want[i])) {
      ++r.obstacle;
      continue;
    }
    target[i] = want[i];
    moves[i] = true;
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<bool> revert(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (!moves[i]) continue;
      bool stayer_there = false;
      std::vector<std::size_t> group;
      for (std::size_t j = 0; j < n; ++j) {
        if (!active[j]) continue;
        if (!moves[j] && pos[j] == target[i]) stayer_there = true;
        if (moves[j] && target[j] == target[i]) group.push_back(j);
      }
      if (stayer_there) {
        revert[i] = true;
      } else if (group.size() >= 2) {
        const auto lowest = *std::min_element(group.begin(), group.end());
        revert[i] = mode == CollisionSystem::BlockAll || lowest != i;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!revert[i]) continue;
      moves[i] = false;
      target[i] = pos[i];
      ++r.vertex;
      changed = true;
    }
    std::vector<bool> swap(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && moves[i] && moves[j] && target[i] == pos[j] && target[j] == pos[i]) swap[i] = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!swap[i]) continue;
      moves[i] = false;
      target[i] = pos[i];
      ++r.edge;
      changed = true;
    }
  }
  r.positions = target;
  return r;
}

// Plain breadth-first distances keyed by cell; -1 when unreachable.
inline std::map<Cell, int> distances_from(const MapGrid& g, Cell source) {
  std::map<Cell, int> dist;
  if (!free_cell(g, source)) return dist;
  std::queue<Cell> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop();
    const Cell next[4] = {{c.row + 1, c.col}, {c.row - 1, c.col}, {c.row, c.col + 1}, {c.row, c.col - 1}};
    for (const Cell m : next) {
      if (free_cell(g, m) && !dist.count(m)) {
        dist[m] = dist[c] + 1;
        q.push(m);
      }
    }
  }
  return dist;
}

inline int distance(const MapGrid& g, Cell a, Cell b) {
  const auto d = distances_from(g, a);
  const auto it = d.find(b);
  return it == d.end() ? -1 : it->second;
}

// Union-find over free cells.
struct Connectivity {
  std::vector<int> parent;
  int components = 0;
  std::int64_t free_cells = 0;
  std::int64_t adjacencies = 0;

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
};

inline Connectivity connectivity(const MapGrid& g) {
  Connectivity c;
  const int w = g.width();
  const int h = g.height();
  c.parent.resize(static_cast<std::size_t>(w * h));
  std::iota(c.parent.begin(), c.parent.end(), 0);
  auto is_free = [&](int r, int col) { return free_cell(g, {r, col}); };
  for (int r = 0; r < h; ++r) {
    for (int col = 0; col < w; ++col) {
      if (!is_free(r, col)) continue;
      ++c.free_cells;
      const int self = r * w + col;
      if (col + 1 < w && is_free(r, col + 1)) {
        ++c.adjacencies;
        c.parent[c.find(self)] = c.find(self + 1);
      }
      if (r + 1 < h && is_free(r + 1, col)) {
        ++c.adjacencies;
        c.parent[c.find(self)] = c.find(self + w);
      }
    }
  }
  std::set<int> roots;
  for (int r = 0; r < h; ++r) {
    for (int col = 0; col < w; ++col) {
      if (is_free(r, col)) roots.insert(c.find(r * w + col));
    }
  }
  c.components = static_cast<int>(roots.size());
  return c;
}

// Occupancy and motion checks between two consecutive states.
struct StepCheck {
  bool overlap = false;
  bool on_obstacle = false;
  bool teleport = false;
  bool swap = false;
};

inline StepCheck check_step(const MapGrid& g, const std::vector<Cell>& before, const std::vector<Cell>& after,
                            const std::vector<std::uint8_t>& active_before, const std::vector<std::uint8_t>& active_after) {
  StepCheck s;
  std::set<Cell> seen;
  for (std::size_t i = 0; i < after.size(); ++i) {
    if (!active_after[i]) continue;
    if (!seen.insert(after[i]).second) s.overlap = true;
    if (!free_cell(g, after[i])) s.on_obstacle = true;
  }
  for (std::size_t i = 0; i < after.size(); ++i) {
    if (!active_before[i]) continue;
    if (std::abs(after[i].row - before[i].row) + std::abs(after[i].col - before[i].col) > 1) s.teleport = true;
    for (std::size_t j = i + 1; j < after.size(); ++j) {
      if (!active_before[j]) continue;
      if (before[i] != before[j] && after[i] == before[j] && after[j] == before[i]) s.swap = true;
    }
  }
  return s;
}

inline MapGrid parse(const std::vector<std::string>& rows) {
  std::vector<std::uint8_t> cells;
  for (const auto& r : rows) {
    for (const char ch : r) cells.push_back(ch == '#' ? 1 : 0);
  }
  return MapGrid(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), cells);
}

}  // namespace oracle
