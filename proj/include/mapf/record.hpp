#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mapf/core.hpp"
#include "mapf/maps_io.hpp"

namespace mapf {

/// One evaluated (instance, algorithm) episode.
struct EpisodeRecord {
  InstanceSpec instance;
  std::string algorithm_alias;
  std::string algorithm_name;
  nlohmann::json algorithm_params = nlohmann::json::object();
  std::int64_t soc = 0;
  int makespan = 0;
  bool csr = false;
  std::int64_t goals_achieved = 0;
  double throughput = 0.0;
  CollisionTally collisions;
  double runtime_seconds = 0.0;
  int episode_length = 0;
  std::vector<std::optional<int>> per_agent_goal_times;
  /// Shortest start-goal distance per agent (initial goals).
  std::vector<int> per_agent_optimal_costs;
  /// Set when the episode could not be run; indicator fields are then zero.
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

nlohmann::json to_json(const EpisodeRecord& record);
/// Throws std::invalid_argument naming the offending field.
EpisodeRecord record_from_json(const nlohmann::json& j);

}  // namespace mapf
