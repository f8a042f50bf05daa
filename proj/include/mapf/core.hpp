#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mapf/grid.hpp"
#include "mapf/rng.hpp"

namespace mapf {

enum class Action : std::uint8_t { Wait = 0, Up = 1, Down = 2, Left = 3, Right = 4 };
inline constexpr int kActionCount = 5;

constexpr Cell apply(Cell c, Action a) noexcept {
  switch (a) {
    case Action::Up: return {c.row - 1, c.col};
    case Action::Down: return {c.row + 1, c.col};
    case Action::Left: return {c.row, c.col - 1};
    case Action::Right: return {c.row, c.col + 1};
    case Action::Wait: break;
  }
  return c;
}

/// Action that moves `from` onto the adjacent (or same) cell `to`.
Action action_between(Cell from, Cell to);

enum class OnTarget { Nothing, Restart, Disappear };
enum class CollisionSystem { BlockAll, Soft };
enum class ProblemKind { Mapf, Lmapf };

std::string_view to_string(OnTarget v) noexcept;
std::string_view to_string(CollisionSystem v) noexcept;
std::string_view to_string(ProblemKind v) noexcept;
OnTarget on_target_from_string(std::string_view text);
CollisionSystem collision_system_from_string(std::string_view text);
ProblemKind problem_kind_from_string(std::string_view text);

struct GridConfig {
  int width = 8;
  int height = 8;
  double density = 0.3;
  int num_agents = 1;
  int obs_radius = 5;
  int max_episode_steps = 64;
  OnTarget on_target = OnTarget::Nothing;
  CollisionSystem collision_system = CollisionSystem::Soft;
  std::uint64_t seed = 0;
  /// When set, width/height/density are ignored.
  std::shared_ptr<const MapGrid> map;
  bool shared_reward = false;

  ProblemKind problem() const noexcept {
    return on_target == OnTarget::Restart ? ProblemKind::Lmapf : ProblemKind::Mapf;
  }
  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct CollisionTally {
  std::int64_t obstacle = 0;
  std::int64_t vertex = 0;
  std::int64_t edge = 0;

  std::int64_t total() const noexcept { return obstacle + vertex + edge; }
  CollisionTally& operator+=(const CollisionTally& o) noexcept {
    obstacle += o.obstacle;
    vertex += o.vertex;
    edge += o.edge;
    return *this;
  }
  friend bool operator==(const CollisionTally&, const CollisionTally&) = default;
};

struct StepOutcome {
  std::vector<double> rewards;
  bool terminated = false;
  bool truncated = false;
  CollisionTally collisions;
  int goals_reached = 0;
};

struct MoveResolution {
  std::vector<Cell> positions;
  CollisionTally collisions;
};

/// Simultaneous move resolution with collision shielding. Holds per-cell
/// scratch buffers so repeated calls on the same map do not allocate.
///
/// Semantics: blocked or out-of-map targets become waits (one obstacle event
/// each). Then, on the snapshot, movers whose target is held by a staying
/// agent revert; same-target groups revert entirely (block_all) or all but
/// the lowest index (soft); one vertex event per reverted agent. Next, movers
/// exchanging cells both revert (one edge event each). Reverting an agent
/// turns its cell into a stayer cell, which propagates until a fixed point.
class MoveResolver {
 public:
  /// `desired` holds the requested cells on input and the resolved cells on
  /// output. Inactive agents are ignored and left untouched.
  CollisionTally resolve(std::span<const Cell> positions, std::span<Cell> desired, const MapGrid& grid,
                         std::span<const std::uint8_t> active, CollisionSystem mode);

 private:
  void ensure_size(std::size_t cells);

  std::vector<std::int32_t> occupant_;
  std::vector<std::int32_t> claim_count_;
  std::vector<std::int32_t> claimant_;
  std::vector<std::size_t> touched_;
  std::vector<std::uint8_t> moving_;
  std::vector<std::uint8_t> reverted_;
  std::vector<std::int32_t> worklist_;
};

MoveResolution resolve_moves(std::span<const Cell> positions, std::span<const Cell> desired,
                             const MapGrid& grid, std::span<const std::uint8_t> active,
                             CollisionSystem mode);

/// Explicit start/goal placement for create_env.
struct Scenario {
  std::vector<Cell> starts;
  std::vector<Cell> goals;
};

struct EpisodeIndicators {
  std::int64_t soc = 0;
  int makespan = 0;
  bool csr = false;
  std::int64_t goals_achieved = 0;
  double throughput = 0.0;
  CollisionTally collisions;
  int episode_length = 0;
  /// First arrival step per agent, nullopt for agents that never arrived.
  std::vector<std::optional<int>> per_agent_goal_times;
};

/// Mutable simulation state of one episode. Single writer: all mutation goes
/// through step(). Copyable, so snapshots and rollbacks are plain copies.
class Env {
 public:
  /// Builds the map (generated from the config when absent) and samples
  /// starts/goals from config.seed unless a scenario is supplied.
  explicit Env(GridConfig config, std::optional<Scenario> scenario = std::nullopt);

  StepOutcome step(std::span<const Action> actions);

  const GridConfig& config() const noexcept { return config_; }
  const MapGrid& grid() const noexcept { return *map_; }
  std::shared_ptr<const MapGrid> grid_ptr() const noexcept { return map_; }
  const Components& components() const noexcept { return *components_; }
  int num_agents() const noexcept { return config_.num_agents; }
  std::span<const Cell> positions() const noexcept { return positions_; }
  std::span<const Cell> goals() const noexcept { return goals_; }
  std::span<const std::uint8_t> active() const noexcept { return active_; }
  bool is_active(int agent) const noexcept { return active_[static_cast<std::size_t>(agent)] != 0; }
  int step_count() const noexcept { return step_; }
  std::span<const std::int32_t> goal_times() const noexcept { return goal_time_; }
  std::int64_t goals_achieved() const noexcept { return goals_achieved_; }
  const CollisionTally& collisions() const noexcept { return collisions_; }
  bool terminated() const noexcept { return terminated_; }
  bool truncated() const noexcept { return truncated_; }
  bool done() const noexcept { return terminated_ || truncated_; }
  /// Active agent standing on a cell, or -1.
  std::int32_t occupant(Cell c) const noexcept { return occupancy_[map_->index(c)]; }

 private:
  void place(const Scenario& scenario);
  Cell draw_goal(int agent);

  GridConfig config_;
  std::shared_ptr<const MapGrid> map_;
  std::shared_ptr<const Components> components_;
  std::vector<Cell> positions_;
  std::vector<Cell> goals_;
  std::vector<std::uint8_t> active_;
  std::vector<std::int32_t> goal_time_;
  std::vector<std::int32_t> occupancy_;
  std::vector<CounterRng> goal_rngs_;
  std::vector<Cell> desired_;
  MoveResolver resolver_;
  int step_ = 0;
  std::int64_t goals_achieved_ = 0;
  CollisionTally collisions_;
  bool terminated_ = false;
  bool truncated_ = false;
};

inline Env create_env(GridConfig config, std::shared_ptr<const MapGrid> map = nullptr,
                      std::optional<Scenario> scenario = std::nullopt) {
  if (map) config.map = std::move(map);
  return Env(std::move(config), std::move(scenario));
}

/// Primary indicators of a finished episode. Unsolved agents contribute
/// max_episode_steps to SoC and makespan.
EpisodeIndicators episode_indicators(const Env& env);

}  // namespace mapf
