#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mapf/core.hpp"

namespace mapf {

struct ObsOptions {
  /// Mark the observing agent at the centre of its own agents plane.
  bool include_self = true;
};

/// Ego-centric (2R+1) x (2R+1) binary planes, row-major.
struct Observation {
  int radius = 0;
  std::vector<std::uint8_t> obstacles;
  std::vector<std::uint8_t> agents;
  std::vector<std::uint8_t> target;
  Cell self_position;
  Cell self_goal;

  int side() const noexcept { return 2 * radius + 1; }
  /// Plane lookup by offset from the centre, |dr|, |dc| <= radius.
  std::uint8_t at(const std::vector<std::uint8_t>& plane, int dr, int dc) const noexcept {
    return plane[static_cast<std::size_t>((dr + radius) * side() + (dc + radius))];
  }
};

/// Componentwise clamp of a goal offset onto the field-of-view boundary.
constexpr Cell project_offset(Cell offset, int radius) noexcept {
  auto clamp = [radius](int v) { return v < -radius ? -radius : (v > radius ? radius : v); };
  return {clamp(offset.row), clamp(offset.col)};
}

/// Reusable writer for the stacked [obstacles, agents, target] planes of any
/// agent in environments over one map. Out-of-map cells read as obstacles.
class ObservationBuilder {
 public:
  ObservationBuilder(const MapGrid& grid, int radius);

  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  std::size_t plane_size() const noexcept { return static_cast<std::size_t>(side() * side()); }

  /// Writes 3 * side * side bytes. Requires an active agent.
  void write(const Env& env, int agent, std::span<std::uint8_t> out, ObsOptions options = {}) const;

 private:
  int radius_;
  int padded_width_;
  std::vector<std::uint8_t> padded_obstacles_;
};

/// Throws std::out_of_range for a bad index and std::invalid_argument for an
/// inactive agent.
Observation extract_observation(const Env& env, int agent, ObsOptions options = {});

struct GlobalState {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> obstacles;
  std::vector<Cell> positions;
  std::vector<Cell> goals;
  std::vector<std::uint8_t> active;
  int step = 0;

  friend bool operator==(const GlobalState&, const GlobalState&) = default;
};

GlobalState export_global_state(const Env& env);

}  // namespace mapf
