#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mapf/core.hpp"
#include "mapf/rng.hpp"

namespace mapf {

using DistanceField = std::vector<std::int32_t>;
inline constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

/// Exact 4-connected distance from every cell to `goal`; kUnreachable for
/// obstacles and cells outside the goal's component.
DistanceField bfs_distances(const MapGrid& map, Cell goal);

using Path = std::vector<Cell>;

inline int path_cost(const Path& path) noexcept { return path.empty() ? 0 : static_cast<int>(path.size()) - 1; }

struct AStarOptions {
  /// Optional per-cell overlay of temporary obstacles (non-zero = blocked).
  std::span<const std::uint8_t> extra_blocked{};
  /// Optional admissible heuristic per cell; Manhattan distance otherwise.
  std::span<const std::int32_t> heuristic{};
};

/// Grid A* with reusable buffers. Ties on f break by smaller h, then row,
/// then column.
class AStarSearch {
 public:
  std::optional<Path> find(const MapGrid& map, Cell start, Cell goal, const AStarOptions& options = {});

  std::size_t last_expansions() const noexcept { return expansions_; }

 private:
  std::vector<std::uint32_t> seen_stamp_;
  std::vector<std::uint32_t> closed_stamp_;
  std::vector<std::int32_t> g_;
  std::vector<std::uint32_t> parent_;
  std::uint32_t stamp_ = 0;
  std::size_t expansions_ = 0;
};

std::optional<Path> a_star(const MapGrid& map, Cell start, Cell goal, const AStarOptions& options = {});

/// Per-goal distance fields for one map, computed on demand.
class DistanceCache {
 public:
  const DistanceField& get(const MapGrid& map, Cell goal);
  void clear() noexcept;

 private:
  const MapGrid* map_ = nullptr;
  std::unordered_map<std::size_t, DistanceField> fields_;
};

/// Decision-making interface used by the evaluation harness. act() sees a
/// read-only environment; decentralized policies restrict themselves to each
/// agent's field of view.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void reset_states() = 0;
  virtual std::vector<Action> act(const Env& env) = 0;
  virtual std::string_view name() const noexcept = 0;
};

/// Uniform over the five actions per agent per step.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : seed_(seed), rng_(seed, Stream::Policy) {}
  void reset_states() override { rng_ = CounterRng(seed_, Stream::Policy); }
  std::vector<Action> act(const Env& env) override;
  void act_into(std::span<Action> out);
  std::string_view name() const noexcept override { return "random"; }

 private:
  std::uint64_t seed_;
  CounterRng rng_;
};

/// Every agent follows its own shortest path and ignores the others.
class AStarPolicy final : public Policy {
 public:
  void reset_states() override { distances_.clear(); }
  std::vector<Action> act(const Env& env) override;
  std::string_view name() const noexcept override { return "a_star"; }

 private:
  DistanceCache distances_;
};

/// Decentralized replanning: each agent runs A* with the other agents it can
/// see (within the observation radius) as temporary obstacles and takes the
/// first move. Falls back to planning without agents, then to WAIT.
/// Head-on encounters in 1-wide corridors may livelock.
class GreedyReplanPolicy final : public Policy {
 public:
  void reset_states() override;
  std::vector<Action> act(const Env& env) override;
  std::string_view name() const noexcept override { return "greedy"; }

 private:
  DistanceCache distances_;
  AStarSearch search_;
  std::vector<std::uint8_t> overlay_;
  std::vector<std::size_t> marked_;
};

/// Space-time reservations: vertices (cell, t) and directed moves arriving at t.
class ReservationTable {
 public:
  explicit ReservationTable(std::size_t cells = 0) : cells_(cells) {}

  void reset(std::size_t cells);
  void reserve_vertex(std::size_t cell, int t);
  void reserve_move(std::size_t from, std::size_t to, int t);
  /// Reserves every vertex for t = 1..len-1 and every move of a path given as
  /// cell indices for t = 0..len-1.
  void reserve_path(std::span<const std::size_t> path);

  bool vertex_reserved(std::size_t cell, int t) const;
  /// True if some plan traverses to -> from arriving at t (a swap with from -> to).
  bool swap_reserved(std::size_t from, std::size_t to, int t) const;

 private:
  std::uint64_t vertex_key(std::size_t cell, int t) const noexcept {
    return static_cast<std::uint64_t>(t) * cells_ + cell;
  }
  std::uint64_t move_key(std::size_t from, std::size_t to, int t) const noexcept {
    return (static_cast<std::uint64_t>(t) * cells_ + from) * cells_ + to;
  }

  std::uint64_t cells_;
  std::unordered_set<std::uint64_t> vertices_;
  std::unordered_set<std::uint64_t> moves_;
};

/// Centralized prioritized planning with a rolling horizon. Every `window`
/// steps all agents are planned by space-time A* over `horizon` steps against
/// a shared reservation table, in index order with agents parked on their goal
/// last. Agents not yet planned hold their current cell for the window, so an
/// agent that finds no plan can always wait in place. Parked agents are first
/// allowed to give way; the held-cell pass is the fallback. Committed plans
/// never collide.
class PrioritizedWindowedPlanner final : public Policy {
 public:
  PrioritizedWindowedPlanner(int window = 5, int horizon = 20);

  void reset_states() override;
  std::vector<Action> act(const Env& env) override;
  std::string_view name() const noexcept override { return "prioritized"; }

  int window() const noexcept { return window_; }
  int horizon() const noexcept { return horizon_; }
  /// Committed plans (cell per timestep from the last replan) for inspection.
  const std::vector<Path>& plans() const noexcept { return plans_; }
  const ReservationTable& reservations() const noexcept { return table_; }

 private:
  void replan(const Env& env);
  std::optional<Path> plan_agent(const Env& env, int agent, const DistanceField& h);

  int window_;
  int horizon_;
  int plan_start_ = -1;
  std::vector<Path> plans_;
  ReservationTable table_;
  DistanceCache distances_;
  std::vector<std::int32_t> holder_;
  // Space-time search workspace.
  std::vector<std::uint32_t> closed_stamp_;
  std::uint32_t stamp_ = 0;
};

}  // namespace mapf
