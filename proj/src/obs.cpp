#include "mapf/obs.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

namespace mapf {

ObservationBuilder::ObservationBuilder(const MapGrid& grid, int radius)
    : radius_(radius), padded_width_(grid.width() + 2 * radius) {
  if (radius < 1) throw std::invalid_argument("observation radius must be >= 1");
  const auto padded_height = static_cast<std::size_t>(grid.height() + 2 * radius);
  padded_obstacles_.assign(padded_height * static_cast<std::size_t>(padded_width_), 1);
  const auto cells = grid.cells();
  for (int r = 0; r < grid.height(); ++r) {
    std::memcpy(&padded_obstacles_[static_cast<std::size_t>(r + radius) * static_cast<std::size_t>(padded_width_) +
                                   static_cast<std::size_t>(radius)],
                &cells[grid.index({r, 0})], static_cast<std::size_t>(grid.width()));
  }
}

void ObservationBuilder::write(const Env& env, int agent, std::span<std::uint8_t> out, ObsOptions options) const {
  const int s = side();
  const auto plane = plane_size();
  if (out.size() < 3 * plane) throw std::invalid_argument("observation buffer too small");
  const auto a = static_cast<std::size_t>(agent);
  const Cell pos = env.positions()[a];
  const Cell goal = env.goals()[a];
  const MapGrid& grid = env.grid();

  std::uint8_t* obstacles = out.data();
  std::uint8_t* agents = out.data() + plane;
  std::uint8_t* target = out.data() + 2 * plane;

  for (int r = 0; r < s; ++r) {
    // Padded coordinates of the window's top-left corner are (pos.row, pos.col).
    std::memcpy(obstacles + r * s,
                &padded_obstacles_[static_cast<std::size_t>(pos.row + r) * static_cast<std::size_t>(padded_width_) +
                                   static_cast<std::size_t>(pos.col)],
                static_cast<std::size_t>(s));
  }

  std::memset(agents, 0, plane);
  const int row0 = std::max(0, pos.row - radius_);
  const int row1 = std::min(grid.height() - 1, pos.row + radius_);
  const int col0 = std::max(0, pos.col - radius_);
  const int col1 = std::min(grid.width() - 1, pos.col + radius_);
  for (int r = row0; r <= row1; ++r) {
    std::uint8_t* dst = agents + (r - pos.row + radius_) * s;
    for (int c = col0; c <= col1; ++c) {
      if (env.occupant({r, c}) >= 0) dst[c - pos.col + radius_] = 1;
    }
  }
  if (!options.include_self) agents[radius_ * s + radius_] = 0;

  std::memset(target, 0, plane);
  const Cell offset = project_offset({goal.row - pos.row, goal.col - pos.col}, radius_);
  target[(offset.row + radius_) * s + (offset.col + radius_)] = 1;
}

Observation extract_observation(const Env& env, int agent, ObsOptions options) {
  if (agent < 0 || agent >= env.num_agents()) throw std::out_of_range("agent index " + std::to_string(agent));
  if (!env.is_active(agent)) throw std::invalid_argument("agent " + std::to_string(agent) + " is not active");
  const ObservationBuilder builder(env.grid(), env.config().obs_radius);
  std::vector<std::uint8_t> buffer(3 * builder.plane_size());
  builder.write(env, agent, buffer, options);
  Observation obs;
  obs.radius = builder.radius();
  const auto plane = static_cast<std::ptrdiff_t>(builder.plane_size());
  obs.obstacles.assign(buffer.begin(), buffer.begin() + plane);
  obs.agents.assign(buffer.begin() + plane, buffer.begin() + 2 * plane);
  obs.target.assign(buffer.begin() + 2 * plane, buffer.end());
  obs.self_position = env.positions()[static_cast<std::size_t>(agent)];
  obs.self_goal = env.goals()[static_cast<std::size_t>(agent)];
  return obs;
}

GlobalState export_global_state(const Env& env) {
  GlobalState s;
  s.width = env.grid().width();
  s.height = env.grid().height();
  const auto cells = env.grid().cells();
  s.obstacles.assign(cells.begin(), cells.end());
  s.positions.assign(env.positions().begin(), env.positions().end());
  s.goals.assign(env.goals().begin(), env.goals().end());
  s.active.assign(env.active().begin(), env.active().end());
  s.step = env.step_count();
  return s;
}

}  // namespace mapf
