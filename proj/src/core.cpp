#include "mapf/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mapf/errors.hpp"
#include "mapf/mapgen.hpp"
#include "mapf/maps_io.hpp"

namespace mapf {

Action action_between(Cell from, Cell to) {
  const int dr = to.row - from.row;
  const int dc = to.col - from.col;
  if (dr == 0 && dc == 0) return Action::Wait;
  if (dr == -1 && dc == 0) return Action::Up;
  if (dr == 1 && dc == 0) return Action::Down;
  if (dr == 0 && dc == -1) return Action::Left;
  if (dr == 0 && dc == 1) return Action::Right;
  throw std::invalid_argument("cells are not adjacent");
}

std::string_view to_string(OnTarget v) noexcept {
  switch (v) {
    case OnTarget::Nothing: return "nothing";
    case OnTarget::Restart: return "restart";
    case OnTarget::Disappear: return "disappear";
  }
  return "nothing";
}

std::string_view to_string(CollisionSystem v) noexcept {
  return v == CollisionSystem::Soft ? "soft" : "block_all";
}

std::string_view to_string(ProblemKind v) noexcept { return v == ProblemKind::Lmapf ? "lmapf" : "mapf"; }

OnTarget on_target_from_string(std::string_view text) {
  if (text == "nothing") return OnTarget::Nothing;
  if (text == "restart") return OnTarget::Restart;
  if (text == "disappear") return OnTarget::Disappear;
  throw std::invalid_argument("unknown on_target '" + std::string(text) + "'");
}

CollisionSystem collision_system_from_string(std::string_view text) {
  if (text == "soft") return CollisionSystem::Soft;
  if (text == "block_all") return CollisionSystem::BlockAll;
  throw std::invalid_argument("unknown collision_system '" + std::string(text) + "'");
}

ProblemKind problem_kind_from_string(std::string_view text) {
  if (text == "mapf") return ProblemKind::Mapf;
  if (text == "lmapf") return ProblemKind::Lmapf;
  throw std::invalid_argument("unknown problem '" + std::string(text) + "'");
}

void GridConfig::validate() const {
  if (!(density >= 0.0 && density < 1.0)) throw std::invalid_argument("density must be in [0, 1)");
  if (num_agents < 1) throw std::invalid_argument("num_agents must be >= 1");
  if (obs_radius < 1) throw std::invalid_argument("obs_radius must be >= 1");
  if (max_episode_steps < 1) throw std::invalid_argument("max_episode_steps must be >= 1");
  if (!map && (width < 2 || height < 2)) throw std::invalid_argument("width and height must be >= 2");
}

// ---------------------------------------------------------------------------
// Move resolution

void MoveResolver::ensure_size(std::size_t cells) {
  if (occupant_.size() != cells) {
    occupant_.assign(cells, -1);
    claim_count_.assign(cells, 0);
    claimant_.assign(cells, -1);
  }
}

CollisionTally MoveResolver::resolve(std::span<const Cell> positions, std::span<Cell> desired,
                                     const MapGrid& grid, std::span<const std::uint8_t> active,
                                     CollisionSystem mode) {
  const std::size_t n = positions.size();
  ensure_size(grid.size());
  moving_.assign(n, 0);
  reverted_.assign(n, 0);
  worklist_.clear();
  touched_.clear();
  CollisionTally tally;

  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    const auto here = grid.index(positions[i]);
    occupant_[here] = static_cast<std::int32_t>(i);
    touched_.push_back(here);
    if (desired[i] == positions[i]) continue;
    if (!grid.passable(desired[i])) {
      desired[i] = positions[i];
      ++tally.obstacle;
      continue;
    }
    moving_[i] = 1;
    const auto target = grid.index(desired[i]);
    if (claim_count_[target]++ == 0) {
      claimant_[target] = static_cast<std::int32_t>(i);
      touched_.push_back(target);
    }
  }

  auto is_stayer = [&](std::int32_t agent) { return agent >= 0 && !moving_[static_cast<std::size_t>(agent)]; };

  // Vertex pass on the snapshot.
  for (std::size_t i = 0; i < n; ++i) {
    if (!moving_[i]) continue;
    const auto target = grid.index(desired[i]);
    bool revert = false;
    if (is_stayer(occupant_[target])) {
      revert = true;
    } else if (claim_count_[target] >= 2) {
      revert = mode == CollisionSystem::BlockAll || claimant_[target] != static_cast<std::int32_t>(i);
    }
    if (revert) reverted_[i] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!reverted_[i]) continue;
    moving_[i] = 0;
    ++tally.vertex;
    worklist_.push_back(static_cast<std::int32_t>(i));
  }
  // After the vertex pass each target cell has at most one remaining mover.
  for (std::size_t i = 0; i < n; ++i) {
    if (moving_[i]) claimant_[grid.index(desired[i])] = static_cast<std::int32_t>(i);
  }

  // Edge pass: movers exchanging cells.
  const std::size_t edge_start = worklist_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!moving_[i]) continue;
    const std::int32_t j = occupant_[grid.index(desired[i])];
    if (j < 0 || static_cast<std::size_t>(j) == i || !moving_[static_cast<std::size_t>(j)]) continue;
    if (desired[static_cast<std::size_t>(j)] == positions[i]) {
      worklist_.push_back(static_cast<std::int32_t>(i));
    }
  }
  for (std::size_t w = edge_start; w < worklist_.size(); ++w) {
    moving_[static_cast<std::size_t>(worklist_[w])] = 0;
    ++tally.edge;
  }

  // Cascade: a reverted agent's cell now holds a stayer.
  for (std::size_t w = 0; w < worklist_.size(); ++w) {
    const auto agent = static_cast<std::size_t>(worklist_[w]);
    desired[agent] = positions[agent];
    const std::int32_t k = claimant_[grid.index(positions[agent])];
    if (k >= 0 && moving_[static_cast<std::size_t>(k)] &&
        desired[static_cast<std::size_t>(k)] == positions[agent]) {
      moving_[static_cast<std::size_t>(k)] = 0;
      ++tally.vertex;
      worklist_.push_back(k);
    }
  }

  for (const auto cell : touched_) {
    occupant_[cell] = -1;
    claim_count_[cell] = 0;
    claimant_[cell] = -1;
  }
  return tally;
}

MoveResolution resolve_moves(std::span<const Cell> positions, std::span<const Cell> desired,
                             const MapGrid& grid, std::span<const std::uint8_t> active,
                             CollisionSystem mode) {
  if (positions.size() != desired.size() || positions.size() != active.size()) {
    throw std::invalid_argument("resolve_moves: per-agent spans differ in length");
  }
  MoveResolution out{std::vector<Cell>(desired.begin(), desired.end()), {}};
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!active[i]) {
      out.positions[i] = positions[i];
      continue;
    }
    const int dist = std::abs(desired[i].row - positions[i].row) + std::abs(desired[i].col - positions[i].col);
    if (dist > 1) throw std::invalid_argument("resolve_moves: desired cell is not a unit move");
  }
  MoveResolver resolver;
  out.collisions = resolver.resolve(positions, out.positions, grid, active, mode);
  return out;
}

// ---------------------------------------------------------------------------
// Environment

Env::Env(GridConfig config, std::optional<Scenario> scenario) : config_(std::move(config)) {
  config_.validate();
  if (config_.map) {
    map_ = config_.map;
  } else {
    map_ = std::make_shared<const MapGrid>(
        gen_random(config_.width, config_.height, config_.density, config_.seed));
  }
  components_ = std::make_shared<const Components>(*map_);
  if (static_cast<std::size_t>(config_.num_agents) > map_->free_count()) {
    throw InstanceError("agent count " + std::to_string(config_.num_agents) + " exceeds free-cell count " +
                        std::to_string(map_->free_count()));
  }
  if (scenario) {
    place(*scenario);
  } else {
    auto placed = sample_instance(*map_, config_.num_agents, config_.seed);
    place(Scenario{std::move(placed.starts), std::move(placed.goals)});
  }
}

void Env::place(const Scenario& scenario) {
  const auto n = static_cast<std::size_t>(config_.num_agents);
  if (scenario.starts.size() != n || scenario.goals.size() != n) {
    throw InstanceError("scenario must provide exactly one start and one goal per agent");
  }
  occupancy_.assign(map_->size(), -1);
  std::vector<std::uint8_t> goal_used(map_->size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell s = scenario.starts[i];
    const Cell g = scenario.goals[i];
    if (!map_->passable(s)) throw InstanceError("start of agent " + std::to_string(i) + " is on an obstacle");
    if (!map_->passable(g)) throw InstanceError("goal of agent " + std::to_string(i) + " is on an obstacle");
    if (occupancy_[map_->index(s)] != -1) throw InstanceError("duplicate start cells");
    if (goal_used[map_->index(g)]) throw InstanceError("duplicate goal cells");
    if (components_->label(map_->index(s)) != components_->label(map_->index(g))) {
      throw InstanceError("unreachable goal for agent " + std::to_string(i));
    }
    occupancy_[map_->index(s)] = static_cast<std::int32_t>(i);
    goal_used[map_->index(g)] = 1;
  }
  positions_ = scenario.starts;
  goals_ = scenario.goals;
  active_.assign(n, 1);
  goal_time_.assign(n, -1);
  desired_.resize(n);
  goal_rngs_.clear();
  if (config_.on_target == OnTarget::Restart) {
    goal_rngs_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) goal_rngs_.emplace_back(config_.seed, Stream::GoalRefresh, i);
  }
}

Cell Env::draw_goal(int agent) {
  const auto a = static_cast<std::size_t>(agent);
  const auto here = map_->index(positions_[a]);
  const auto members = components_->members(components_->label(here));
  // Instances never place an agent in a singleton component.
  const auto pick = goal_rngs_[a].below(members.size() - 1);
  const auto it = std::lower_bound(members.begin(), members.end(), static_cast<std::uint32_t>(here));
  const auto self = static_cast<std::uint64_t>(it - members.begin());
  return map_->cell_at(members[pick >= self ? pick + 1 : pick]);
}

StepOutcome Env::step(std::span<const Action> actions) {
  if (done()) throw std::logic_error("step called after the episode ended");
  const auto n = static_cast<std::size_t>(config_.num_agents);
  if (actions.size() != n) {
    throw std::invalid_argument("expected " + std::to_string(n) + " actions, got " + std::to_string(actions.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<unsigned>(actions[i]) >= kActionCount) throw std::invalid_argument("action out of range");
    desired_[i] = active_[i] ? apply(positions_[i], actions[i]) : positions_[i];
  }

  StepOutcome out;
  out.collisions = resolver_.resolve(positions_, desired_, *map_, active_, config_.collision_system);
  collisions_ += out.collisions;

  for (std::size_t i = 0; i < n; ++i) {
    if (active_[i] && desired_[i] != positions_[i]) occupancy_[map_->index(positions_[i])] = -1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (active_[i] && desired_[i] != positions_[i]) occupancy_[map_->index(desired_[i])] = static_cast<std::int32_t>(i);
  }
  ++step_;
  out.rewards.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active_[i]) continue;
    const bool arrived = desired_[i] == goals_[i] && positions_[i] != goals_[i];
    positions_[i] = desired_[i];
    if (!arrived) continue;
    out.rewards[i] = 1.0;
    ++out.goals_reached;
    const bool first = goal_time_[i] < 0;
    if (first) goal_time_[i] = step_;
    switch (config_.on_target) {
      case OnTarget::Nothing:
        if (first) ++goals_achieved_;
        break;
      case OnTarget::Disappear:
        ++goals_achieved_;
        active_[i] = 0;
        occupancy_[map_->index(positions_[i])] = -1;
        break;
      case OnTarget::Restart:
        ++goals_achieved_;
        goals_[i] = draw_goal(static_cast<int>(i));
        break;
    }
  }
  if (config_.shared_reward) {
    const double shared = static_cast<double>(out.goals_reached) / static_cast<double>(n);
    std::fill(out.rewards.begin(), out.rewards.end(), shared);
  }

  if (config_.on_target != OnTarget::Restart) {
    terminated_ = std::all_of(goal_time_.begin(), goal_time_.end(), [](std::int32_t t) { return t >= 0; });
  }
  truncated_ = !terminated_ && step_ >= config_.max_episode_steps;
  out.terminated = terminated_;
  out.truncated = truncated_;
  return out;
}

EpisodeIndicators episode_indicators(const Env& env) {
  if (!env.done()) throw std::logic_error("episode_indicators called mid-episode");
  EpisodeIndicators out;
  const int limit = env.config().max_episode_steps;
  out.csr = true;
  for (const auto t : env.goal_times()) {
    const int cost = t >= 0 ? t : limit;
    if (t < 0) out.csr = false;
    out.soc += cost;
    out.makespan = std::max(out.makespan, cost);
    out.per_agent_goal_times.push_back(t >= 0 ? std::optional<int>(t) : std::nullopt);
  }
  out.goals_achieved = env.goals_achieved();
  out.throughput = static_cast<double>(out.goals_achieved) / static_cast<double>(limit);
  out.collisions = env.collisions();
  out.episode_length = env.step_count();
  return out;
}

}  // namespace mapf
