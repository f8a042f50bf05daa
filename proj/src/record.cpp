#include "mapf/record.hpp"

#include <stdexcept>

namespace mapf {

using nlohmann::json;

json to_json(const EpisodeRecord& r) {
  const auto& s = r.instance;
  json instance = {{"map_name", s.map_name},
                   {"seed", s.seed},
                   {"num_agents", s.num_agents},
                   {"max_episode_steps", s.max_episode_steps},
                   {"problem", to_string(s.problem)},
                   {"dataset_tag", to_string(s.dataset_tag)},
                   {"on_target", to_string(s.on_target)},
                   {"collision_system", to_string(s.collision_system)},
                   {"obs_radius", s.obs_radius}};
  json goal_times = json::array();
  for (const auto& t : r.per_agent_goal_times) goal_times.push_back(t ? json(*t) : json(nullptr));
  json j = {{"instance", std::move(instance)},
            {"algorithm_alias", r.algorithm_alias},
            {"algorithm_name", r.algorithm_name},
            {"algorithm_params", r.algorithm_params},
            {"SoC", r.soc},
            {"makespan", r.makespan},
            {"csr", r.csr},
            {"goals_achieved", r.goals_achieved},
            {"throughput", r.throughput},
            {"collisions", {{"obstacle", r.collisions.obstacle}, {"vertex", r.collisions.vertex}, {"edge", r.collisions.edge}}},
            {"runtime_seconds", r.runtime_seconds},
            {"episode_length", r.episode_length},
            {"per_agent_goal_times", std::move(goal_times)},
            {"per_agent_optimal_costs", r.per_agent_optimal_costs}};
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  return j;
}

namespace {

template <class T>
T field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad value for field '") + name + "'");
  }
}

}  // namespace

EpisodeRecord record_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  EpisodeRecord r;
  const auto inst = field<json>(j, "instance");
  auto& s = r.instance;
  s.map_name = field<std::string>(inst, "map_name");
  s.seed = field<std::uint64_t>(inst, "seed");
  s.num_agents = field<int>(inst, "num_agents");
  s.max_episode_steps = field<int>(inst, "max_episode_steps");
  s.problem = problem_kind_from_string(field<std::string>(inst, "problem"));
  s.dataset_tag = dataset_tag_from_string(field<std::string>(inst, "dataset_tag"));
  s.on_target = on_target_from_string(field<std::string>(inst, "on_target"));
  s.collision_system = collision_system_from_string(field<std::string>(inst, "collision_system"));
  s.obs_radius = field<int>(inst, "obs_radius");

  r.algorithm_alias = field<std::string>(j, "algorithm_alias");
  r.algorithm_name = j.value("algorithm_name", std::string{});
  r.algorithm_params = j.value("algorithm_params", json::object());
  r.soc = field<std::int64_t>(j, "SoC");
  r.makespan = field<int>(j, "makespan");
  r.csr = field<bool>(j, "csr");
  r.goals_achieved = field<std::int64_t>(j, "goals_achieved");
  r.throughput = field<double>(j, "throughput");
  const auto col = field<json>(j, "collisions");
  r.collisions = {field<std::int64_t>(col, "obstacle"), field<std::int64_t>(col, "vertex"),
                  field<std::int64_t>(col, "edge")};
  r.runtime_seconds = field<double>(j, "runtime_seconds");
  r.episode_length = j.value("episode_length", 0);
  for (const auto& t : field<json>(j, "per_agent_goal_times")) {
    r.per_agent_goal_times.push_back(t.is_null() ? std::nullopt : std::optional<int>(t.get<int>()));
  }
  if (j.contains("per_agent_optimal_costs")) r.per_agent_optimal_costs = field<std::vector<int>>(j, "per_agent_optimal_costs");
  if (const auto it = j.find("error"); it != j.end() && !it->is_null()) r.error = it->get<std::string>();
  return r;
}

}  // namespace mapf
