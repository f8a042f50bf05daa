#include "mapf/solvers.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace mapf {

DistanceField bfs_distances(const MapGrid& map, Cell goal) {
  if (!map.passable(goal)) throw std::invalid_argument("bfs_distances: goal is not a free cell");
  DistanceField dist(map.size(), kUnreachable);
  std::vector<std::uint32_t> queue;
  queue.reserve(map.free_count());
  const auto g = map.index(goal);
  dist[g] = 0;
  queue.push_back(static_cast<std::uint32_t>(g));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Cell c = map.cell_at(queue[head]);
    const auto d = dist[queue[head]];
    for (const Cell o : kNeighbourOffsets) {
      const Cell n{c.row + o.row, c.col + o.col};
      if (!map.passable(n)) continue;
      const auto ni = map.index(n);
      if (dist[ni] != kUnreachable) continue;
      dist[ni] = d + 1;
      queue.push_back(static_cast<std::uint32_t>(ni));
    }
  }
  return dist;
}

// ---------------------------------------------------------------------------

std::optional<Path> AStarSearch::find(const MapGrid& map, Cell start, Cell goal, const AStarOptions& options) {
  expansions_ = 0;
  if (!map.passable(start) || !map.passable(goal)) return std::nullopt;
  const bool overlay = !options.extra_blocked.empty();
  auto blocked = [&](std::size_t idx) { return overlay && options.extra_blocked[idx] != 0; };
  if (blocked(map.index(goal))) return std::nullopt;
  auto heuristic = [&](std::size_t idx) -> std::int32_t {
    if (!options.heuristic.empty()) return options.heuristic[idx];
    const Cell c = map.cell_at(idx);
    return std::abs(c.row - goal.row) + std::abs(c.col - goal.col);
  };

  if (seen_stamp_.size() != map.size()) {
    seen_stamp_.assign(map.size(), 0);
    closed_stamp_.assign(map.size(), 0);
    g_.assign(map.size(), 0);
    parent_.assign(map.size(), 0);
    stamp_ = 0;
  }
  if (++stamp_ == 0) {
    std::fill(seen_stamp_.begin(), seen_stamp_.end(), 0);
    std::fill(closed_stamp_.begin(), closed_stamp_.end(), 0);
    stamp_ = 1;
  }

  // (f, h, row, col) lexicographic; cell index order equals (row, col) order.
  using Entry = std::tuple<std::int32_t, std::int32_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const auto s = static_cast<std::uint32_t>(map.index(start));
  const auto t = map.index(goal);
  const auto hs = heuristic(s);
  if (hs == kUnreachable) return std::nullopt;
  seen_stamp_[s] = stamp_;
  g_[s] = 0;
  parent_[s] = s;
  open.emplace(hs, hs, s);
  while (!open.empty()) {
    const auto [f, h, idx] = open.top();
    open.pop();
    if (closed_stamp_[idx] == stamp_) continue;
    closed_stamp_[idx] = stamp_;
    ++expansions_;
    if (idx == t) {
      Path path;
      for (auto cur = idx;; cur = parent_[cur]) {
        path.push_back(map.cell_at(cur));
        if (cur == s) break;
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    const Cell c = map.cell_at(idx);
    for (const Cell o : kNeighbourOffsets) {
      const Cell n{c.row + o.row, c.col + o.col};
      if (!map.passable(n)) continue;
      const auto ni = static_cast<std::uint32_t>(map.index(n));
      if (blocked(ni) || closed_stamp_[ni] == stamp_) continue;
      const auto ng = g_[idx] + 1;
      if (seen_stamp_[ni] == stamp_ && g_[ni] <= ng) continue;
      const auto nh = heuristic(ni);
      if (nh == kUnreachable) continue;
      seen_stamp_[ni] = stamp_;
      g_[ni] = ng;
      parent_[ni] = idx;
      open.emplace(ng + nh, nh, ni);
    }
  }
  return std::nullopt;
}

std::optional<Path> a_star(const MapGrid& map, Cell start, Cell goal, const AStarOptions& options) {
  AStarSearch search;
  return search.find(map, start, goal, options);
}

const DistanceField& DistanceCache::get(const MapGrid& map, Cell goal) {
  if (map_ != &map) {
    fields_.clear();
    map_ = &map;
  }
  const auto key = map.index(goal);
  auto it = fields_.find(key);
  if (it == fields_.end()) {
    if (fields_.size() >= 4096) fields_.clear();
    it = fields_.emplace(key, bfs_distances(map, goal)).first;
  }
  return it->second;
}

void DistanceCache::clear() noexcept {
  fields_.clear();
  map_ = nullptr;
}

// ---------------------------------------------------------------------------

std::vector<Action> RandomPolicy::act(const Env& env) {
  std::vector<Action> actions(static_cast<std::size_t>(env.num_agents()));
  act_into(actions);
  return actions;
}

void RandomPolicy::act_into(std::span<Action> out) {
  for (auto& a : out) a = static_cast<Action>(rng_.below(kActionCount));
}

namespace {

// First step down a distance field; WAIT at the goal or when unreachable.
Action descend(const MapGrid& map, const DistanceField& dist, Cell from) {
  const auto here = dist[map.index(from)];
  if (here == 0 || here == kUnreachable) return Action::Wait;
  for (const Action a : {Action::Up, Action::Down, Action::Left, Action::Right}) {
    const Cell n = apply(from, a);
    if (map.passable(n) && dist[map.index(n)] == here - 1) return a;
  }
  return Action::Wait;
}

}  // namespace

std::vector<Action> AStarPolicy::act(const Env& env) {
  std::vector<Action> actions(static_cast<std::size_t>(env.num_agents()), Action::Wait);
  for (int i = 0; i < env.num_agents(); ++i) {
    if (!env.is_active(i)) continue;
    const auto& dist = distances_.get(env.grid(), env.goals()[static_cast<std::size_t>(i)]);
    actions[static_cast<std::size_t>(i)] = descend(env.grid(), dist, env.positions()[static_cast<std::size_t>(i)]);
  }
  return actions;
}

void GreedyReplanPolicy::reset_states() {
  distances_.clear();
  overlay_.clear();
  marked_.clear();
}

std::vector<Action> GreedyReplanPolicy::act(const Env& env) {
  const MapGrid& map = env.grid();
  const int radius = env.config().obs_radius;
  std::vector<Action> actions(static_cast<std::size_t>(env.num_agents()), Action::Wait);
  if (overlay_.size() != map.size()) overlay_.assign(map.size(), 0);
  for (int i = 0; i < env.num_agents(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (!env.is_active(i)) continue;
    const Cell pos = env.positions()[a];
    const Cell goal = env.goals()[a];
    if (pos == goal) continue;
    const auto& dist = distances_.get(map, goal);

    for (int r = std::max(0, pos.row - radius); r <= std::min(map.height() - 1, pos.row + radius); ++r) {
      for (int c = std::max(0, pos.col - radius); c <= std::min(map.width() - 1, pos.col + radius); ++c) {
        const auto other = env.occupant({r, c});
        if (other < 0 || other == i) continue;
        const auto idx = map.index({r, c});
        overlay_[idx] = 1;
        marked_.push_back(idx);
      }
    }
    auto path = search_.find(map, pos, goal, {overlay_, dist});
    for (const auto idx : marked_) overlay_[idx] = 0;
    marked_.clear();
    if (!path) path = search_.find(map, pos, goal, {{}, dist});
    if (path && path->size() > 1) actions[a] = action_between((*path)[0], (*path)[1]);
  }
  return actions;
}

// ---------------------------------------------------------------------------

void ReservationTable::reset(std::size_t cells) {
  cells_ = cells;
  vertices_.clear();
  moves_.clear();
}

void ReservationTable::reserve_vertex(std::size_t cell, int t) { vertices_.insert(vertex_key(cell, t)); }

void ReservationTable::reserve_move(std::size_t from, std::size_t to, int t) {
  if (from != to) moves_.insert(move_key(from, to, t));
}

void ReservationTable::reserve_path(std::span<const std::size_t> path) {
  for (std::size_t t = 1; t < path.size(); ++t) {
    reserve_vertex(path[t], static_cast<int>(t));
    reserve_move(path[t - 1], path[t], static_cast<int>(t));
  }
}

bool ReservationTable::vertex_reserved(std::size_t cell, int t) const {
  return vertices_.contains(vertex_key(cell, t));
}

bool ReservationTable::swap_reserved(std::size_t from, std::size_t to, int t) const {
  return from != to && moves_.contains(move_key(to, from, t));
}

PrioritizedWindowedPlanner::PrioritizedWindowedPlanner(int window, int horizon) : window_(window), horizon_(horizon) {
  if (window < 1 || horizon < window) throw std::invalid_argument("planner requires horizon >= window >= 1");
}

void PrioritizedWindowedPlanner::reset_states() {
  plan_start_ = -1;
  plans_.clear();
  distances_.clear();
  table_.reset(0);
}

std::optional<Path> PrioritizedWindowedPlanner::plan_agent(const Env& env, int agent, const DistanceField& h) {
  const MapGrid& map = env.grid();
  const auto a = static_cast<std::size_t>(agent);
  const auto start = map.index(env.positions()[a]);
  const auto goal = map.index(env.goals()[a]);
  const auto layers = static_cast<std::size_t>(horizon_) + 1;
  if (closed_stamp_.size() != map.size() * layers) {
    closed_stamp_.assign(map.size() * layers, 0);
    stamp_ = 0;
  }
  if (++stamp_ == 0) {
    std::fill(closed_stamp_.begin(), closed_stamp_.end(), 0);
    stamp_ = 1;
  }

  auto occupied = [&](std::size_t cell, int t) {
    if (t <= window_ && holder_[cell] >= 0 && holder_[cell] != agent) return true;
    return table_.vertex_reserved(cell, t);
  };
  auto can_stay_until_horizon = [&](std::size_t cell, int from_t) {
    for (int t = from_t + 1; t <= horizon_; ++t) {
      if (occupied(cell, t)) return false;
    }
    return true;
  };

  struct Node {
    std::uint32_t cell;
    int t;
    std::int32_t parent;
  };
  std::vector<Node> nodes;
  // (f, h, t, cell, node index); smaller is better.
  using Entry = std::tuple<std::int32_t, std::int32_t, int, std::uint32_t, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  if (h[start] == kUnreachable) return std::nullopt;
  nodes.push_back({static_cast<std::uint32_t>(start), 0, -1});
  open.emplace(h[start], h[start], 0, static_cast<std::uint32_t>(start), 0);

  std::int32_t found = -1;
  while (!open.empty()) {
    const auto [f, hv, t, cell, id] = open.top();
    open.pop();
    const auto closed_idx = static_cast<std::size_t>(t) * map.size() + cell;
    if (closed_stamp_[closed_idx] == stamp_) continue;
    closed_stamp_[closed_idx] = stamp_;
    if ((cell == goal && can_stay_until_horizon(cell, t)) || t == horizon_) {
      found = id;
      break;
    }
    const Cell c = map.cell_at(cell);
    for (int k = 0; k <= 4; ++k) {
      const Cell n = k == 0 ? c : Cell{c.row + kNeighbourOffsets[k - 1].row, c.col + kNeighbourOffsets[k - 1].col};
      if (!map.passable(n)) continue;
      const auto ni = map.index(n);
      const int nt = t + 1;
      if (closed_stamp_[static_cast<std::size_t>(nt) * map.size() + ni] == stamp_) continue;
      if (occupied(ni, nt) || table_.swap_reserved(cell, ni, nt)) continue;
      if (h[ni] == kUnreachable) continue;
      nodes.push_back({static_cast<std::uint32_t>(ni), nt, id});
      open.emplace(nt + h[ni], h[ni], nt, static_cast<std::uint32_t>(ni), static_cast<std::int32_t>(nodes.size() - 1));
    }
  }
  if (found < 0) return std::nullopt;

  Path path;
  for (auto cur = found; cur >= 0; cur = nodes[static_cast<std::size_t>(cur)].parent) {
    path.push_back(map.cell_at(nodes[static_cast<std::size_t>(cur)].cell));
  }
  std::reverse(path.begin(), path.end());
  // Goal waiting is free and extends the plan to the horizon.
  while (static_cast<int>(path.size()) <= horizon_) path.push_back(path.back());
  return path;
}

void PrioritizedWindowedPlanner::replan(const Env& env) {
  const MapGrid& map = env.grid();
  const auto n = static_cast<std::size_t>(env.num_agents());
  // Agents parked on their goal go last and first try to give way; if one of
  // them then finds no plan, everything is replanned with all cells held.
  std::vector<std::size_t> order;
  std::vector<std::uint8_t> parked(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!env.active()[i]) continue;
    parked[i] = env.positions()[i] == env.goals()[i];
    if (!parked[i]) order.push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (env.active()[i] && parked[i]) order.push_back(i);
  }

  std::vector<std::size_t> indices;
  auto attempt = [&](bool parked_yield) {
    table_.reset(map.size());
    holder_.assign(map.size(), -1);
    plans_.assign(n, {});
    for (const std::size_t i : order) {
      if (!(parked_yield && parked[i])) holder_[map.index(env.positions()[i])] = static_cast<std::int32_t>(i);
    }
    for (const std::size_t i : order) {
      const Cell pos = env.positions()[i];
      const auto& h = distances_.get(map, env.goals()[i]);
      auto path = plan_agent(env, static_cast<int>(i), h);
      if (!path) {
        if (parked_yield && parked[i]) return false;
        path = Path(static_cast<std::size_t>(window_) + 1, pos);
      }
      holder_[map.index(pos)] = -1;
      indices.clear();
      for (const Cell c : *path) indices.push_back(map.index(c));
      table_.reserve_path(indices);
      plans_[i] = std::move(*path);
    }
    return true;
  };
  const bool any_parked = std::find(parked.begin(), parked.end(), 1) != parked.end();
  if (!any_parked || !attempt(true)) attempt(false);
  plan_start_ = env.step_count();
}

std::vector<Action> PrioritizedWindowedPlanner::act(const Env& env) {
  const auto n = static_cast<std::size_t>(env.num_agents());
  bool stale = plan_start_ < 0 || plans_.size() != n || env.step_count() - plan_start_ >= window_ ||
               env.step_count() < plan_start_;
  if (!stale) {
    const auto k = static_cast<std::size_t>(env.step_count() - plan_start_);
    for (std::size_t i = 0; i < n && !stale; ++i) {
      if (env.active()[i] && (plans_[i].size() <= k + 1 || plans_[i][k] != env.positions()[i])) stale = true;
    }
  }
  if (stale) replan(env);
  const auto k = static_cast<std::size_t>(env.step_count() - plan_start_);
  std::vector<Action> actions(n, Action::Wait);
  for (std::size_t i = 0; i < n; ++i) {
    if (!env.active()[i]) continue;
    actions[i] = action_between(plans_[i][k], plans_[i][k + 1]);
  }
  return actions;
}

}  // namespace mapf
