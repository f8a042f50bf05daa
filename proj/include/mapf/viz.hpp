#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mapf/core.hpp"
#include "mapf/obs.hpp"

namespace mapf {

/// Per-step agent states of one episode; step 0 is the initial state.
struct Trajectory {
  std::shared_ptr<const MapGrid> map;
  std::vector<std::vector<Cell>> positions;
  std::vector<std::vector<Cell>> goals;
  std::vector<std::vector<std::uint8_t>> active;

  std::size_t steps() const noexcept { return positions.size(); }
  void record(const Env& env);
  GlobalState snapshot(std::size_t t) const;
  /// Throws std::invalid_argument on ragged step or agent counts.
  void validate() const;
};

struct SvgStyle {
  int cell_size = 16;
  int margin = 4;
  std::string background = "#ffffff";
  std::string free_fill = "#f4f4f4";
  std::string obstacle_fill = "#3b3b3b";
  std::string grid_stroke = "#d8d8d8";
  /// Highlights the (2R+1)^2 field of view of one agent.
  std::optional<int> ego_agent;
  int ego_radius = 5;
};

/// Stable colour for agent i (and its goal marker).
std::string agent_color(std::size_t agent);

std::string render_frame(const GlobalState& state, const SvgStyle& style = {});

/// SMIL-animated SVG; each step lasts `step_duration` seconds. A single-step
/// trajectory renders as the static frame.
std::string render_animation(const Trajectory& trajectory, double step_duration = 0.3, const SvgStyle& style = {});

/// '#' obstacle, '.' free, agents 0-9 A-Z ('@' beyond), '*' goal of an agent
/// standing elsewhere. Rows joined by '\n', no trailing newline.
std::string render_console(const GlobalState& state);

}  // namespace mapf
