#include "mapf/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mapf/errors.hpp"
#include "mapf/metrics.hpp"
#include "mapf/obs.hpp"

#ifndef MAPFBENCH_VERSION
#define MAPFBENCH_VERSION "0.0.0"
#endif

namespace mapf {

using nlohmann::json;

std::string_view code_version() noexcept { return MAPFBENCH_VERSION; }

namespace {

int int_param(const json& params, const char* key, int fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (!it->is_number_integer()) throw std::invalid_argument(std::string("parameter '") + key + "' must be an integer");
  return it->get<int>();
}

}  // namespace

std::unique_ptr<Policy> make_policy(const AlgorithmSpec& algorithm, std::uint64_t instance_seed) {
  const auto& p = algorithm.params;
  if (!p.is_null() && !p.is_object()) throw std::invalid_argument("algorithm params must be a mapping");
  const json params = p.is_null() ? json::object() : p;
  if (algorithm.name == "random") {
    std::uint64_t seed = 0;
    if (const auto it = params.find("seed"); it != params.end()) {
      if (!it->is_number_unsigned() && !it->is_number_integer()) throw std::invalid_argument("parameter 'seed' must be an integer");
      seed = it->get<std::uint64_t>();
    }
    return std::make_unique<RandomPolicy>(mix64(seed ^ mix64(instance_seed)));
  }
  if (algorithm.name == "a_star") return std::make_unique<AStarPolicy>();
  if (algorithm.name == "greedy") return std::make_unique<GreedyReplanPolicy>();
  if (algorithm.name == "prioritized") {
    return std::make_unique<PrioritizedWindowedPlanner>(int_param(params, "window", 5), int_param(params, "horizon", 20));
  }
  throw std::invalid_argument("unknown algorithm '" + algorithm.name + "' (expected random, a_star, greedy or prioritized)");
}

GridConfig instance_config(const InstanceSpec& spec, std::shared_ptr<const MapGrid> map) {
  GridConfig cfg;
  cfg.map = std::move(map);
  cfg.width = cfg.map->width();
  cfg.height = cfg.map->height();
  cfg.num_agents = spec.num_agents;
  cfg.obs_radius = spec.obs_radius;
  cfg.max_episode_steps = spec.max_episode_steps;
  cfg.on_target = spec.on_target;
  cfg.collision_system = spec.collision_system;
  cfg.seed = spec.seed;
  return cfg;
}

EpisodeRecord run_instance(const InstanceSpec& spec, std::shared_ptr<const MapGrid> map, Policy& policy,
                           const AlgorithmSpec& algorithm, Trajectory* trajectory) {
  std::optional<Env> env;
  try {
    env.emplace(instance_config(spec, std::move(map)));
  } catch (const std::exception& e) {
    throw InstanceError(spec.key() + ": " + e.what());
  }
  EpisodeRecord record;
  record.instance = spec;
  record.algorithm_alias = algorithm.alias;
  record.algorithm_name = algorithm.name;
  record.algorithm_params = algorithm.params.is_null() ? json::object() : algorithm.params;
  record.per_agent_optimal_costs.reserve(static_cast<std::size_t>(env->num_agents()));
  {
    DistanceCache cache;
    for (int i = 0; i < env->num_agents(); ++i) {
      const auto& d = cache.get(env->grid(), env->goals()[static_cast<std::size_t>(i)]);
      record.per_agent_optimal_costs.push_back(d[env->grid().index(env->positions()[static_cast<std::size_t>(i)])]);
    }
  }
  if (trajectory) {
    *trajectory = {};
    trajectory->map = env->grid_ptr();
    trajectory->record(*env);
  }

  policy.reset_states();
  const auto start = std::chrono::steady_clock::now();
  while (!env->done()) {
    const auto actions = policy.act(*env);
    env->step(actions);
    if (trajectory) trajectory->record(*env);
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const auto ind = episode_indicators(*env);
  record.soc = ind.soc;
  record.makespan = ind.makespan;
  record.csr = ind.csr;
  record.goals_achieved = ind.goals_achieved;
  record.throughput = ind.throughput;
  record.collisions = ind.collisions;
  record.episode_length = ind.episode_length;
  record.per_agent_goal_times = ind.per_agent_goal_times;
  record.runtime_seconds = std::max(elapsed.count(), 1e-9);
  return record;
}

EpisodeRecord run_instance(const InstanceSpec& spec, const MapRegistry& registry, const AlgorithmSpec& algorithm,
                           Trajectory* trajectory) {
  auto policy = make_policy(algorithm, spec.seed);
  return run_instance(spec, registry.resolve(spec.map_name), *policy, algorithm, trajectory);
}

json RunManifest::to_json() const {
  return {{"config_digest", config_digest}, {"code_version", code_version},
          {"started_at", started_at},       {"finished_at", finished_at},
          {"workers", workers},             {"record_count", record_count},
          {"error_count", error_count}};
}

namespace {

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

SuiteResult run_suite(const EvalConfig& config, const MapRegistry& registry, int workers,
                      const ProgressFn& progress) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  config.validate();
  SuiteResult result;
  result.manifest.config_digest = fnv1a_hex(config.source.empty() ? to_yaml(config) : config.source);
  result.manifest.code_version = std::string(code_version());
  result.manifest.workers = workers;
  result.manifest.started_at = utc_now();

  const auto instances = expand_config(config, registry);
  const auto n_alg = config.algorithms.size();
  const auto total = instances.size() * n_alg;
  result.records.resize(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const auto& spec = instances[job / n_alg];
      const auto& alg = config.algorithms[job % n_alg];
      EpisodeRecord& out = result.records[job];
      try {
        out = run_instance(spec, registry, alg);
      } catch (const std::exception& e) {
        out = {};
        out.instance = spec;
        out.algorithm_alias = alg.alias;
        out.algorithm_name = alg.name;
        out.algorithm_params = alg.params.is_null() ? json::object() : alg.params;
        out.error = e.what();
      }
      const auto finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto extra = static_cast<std::size_t>(workers) - 1;
    pool.reserve(extra);
    for (std::size_t i = 0; i < extra; ++i) pool.emplace_back(work);
    work();
  }

  result.manifest.finished_at = utc_now();
  result.manifest.record_count = result.records.size();
  for (const auto& r : result.records) result.manifest.error_count += r.ok() ? 0 : 1;
  return result;
}

void write_records(std::ostream& out, std::span<const EpisodeRecord> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

std::vector<EpisodeRecord> read_records(std::istream& in) {
  std::vector<EpisodeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), static_cast<int>(line_no));
    }
  }
  return records;
}

void persist_records(const std::filesystem::path& path, std::span<const EpisodeRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_records(out, records);
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<EpisodeRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return read_records(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

BenchResult bench_speed(GridConfig config, double duration_seconds, std::int64_t max_steps) {
  if (!(duration_seconds > 0.0)) throw std::invalid_argument("bench duration must be positive");
  Env env(config);
  config.map = env.grid_ptr();
  ObservationBuilder builder(env.grid(), config.obs_radius);
  const std::size_t per_agent = 3 * builder.plane_size();
  std::vector<std::uint8_t> buffer(per_agent * static_cast<std::size_t>(config.num_agents));
  std::vector<Action> actions(static_cast<std::size_t>(config.num_agents));
  RandomPolicy policy(config.seed);

  BenchResult res;
  res.episodes = 1;
  const auto start = std::chrono::steady_clock::now();
  double elapsed = 0.0;
  while (max_steps < 0 || res.steps < max_steps) {
    policy.act_into(actions);
    env.step(actions);
    ++res.steps;
    for (int i = 0; i < env.num_agents(); ++i) {
      if (!env.is_active(i)) continue;
      builder.write(env, i, std::span(buffer).subspan(static_cast<std::size_t>(i) * per_agent, per_agent));
      ++res.observations;
    }
    if (env.done()) {
      GridConfig next = config;
      next.seed = config.seed + static_cast<std::uint64_t>(res.episodes);
      env = Env(next);
      ++res.episodes;
    }
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= duration_seconds) break;
  }
  res.elapsed_seconds = std::max(elapsed, 1e-9);
  res.sps = static_cast<double>(res.steps) / res.elapsed_seconds;
  res.ops = static_cast<double>(res.observations) / res.elapsed_seconds;
  return res;
}

Trajectory replay(const EpisodeRecord& record, const MapRegistry& registry) {
  if (!record.ok()) throw std::invalid_argument("cannot replay an error record: " + *record.error);
  if (record.algorithm_name.empty()) throw std::invalid_argument("record has no algorithm_name to replay");
  AlgorithmSpec alg{record.algorithm_alias, record.algorithm_name, record.algorithm_params};
  Trajectory trajectory;
  run_instance(record.instance, registry, alg, &trajectory);
  return trajectory;
}

// ---------------------------------------------------------------------------
// Views

namespace {

std::string group_field(const EpisodeRecord& r, const std::string& name) {
  const auto& s = r.instance;
  if (name == "algorithm") return r.algorithm_alias;
  if (name == "map_name") return s.map_name;
  if (name == "num_agents") return std::to_string(s.num_agents);
  if (name == "seed") return std::to_string(s.seed);
  if (name == "dataset" || name == "dataset_tag") return std::string(to_string(s.dataset_tag));
  if (name == "problem") return std::string(to_string(s.problem));
  if (name == "max_episode_steps") return std::to_string(s.max_episode_steps);
  if (name == "on_target") return std::string(to_string(s.on_target));
  if (name == "collision_system") return std::string(to_string(s.collision_system));
  if (name == "obs_radius") return std::to_string(s.obs_radius);
  throw std::invalid_argument("unknown view field '" + name + "'");
}

double metric_value(const EpisodeRecord& r, const std::string& name) {
  if (name == "SoC") return static_cast<double>(r.soc);
  if (name == "makespan") return r.makespan;
  if (name == "csr") return r.csr ? 1.0 : 0.0;
  if (name == "goals_achieved") return static_cast<double>(r.goals_achieved);
  if (name == "throughput") return r.throughput;
  if (name == "collisions") return static_cast<double>(r.collisions.total());
  if (name == "runtime_seconds") return r.runtime_seconds;
  if (name == "episode_length") return r.episode_length;
  throw std::invalid_argument("unknown view metric '" + name + "'");
}

std::vector<std::string> string_list(const json& v) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw std::invalid_argument("view fields must be a string or a list");
  return v.get<std::vector<std::string>>();
}

std::string render_view(std::span<const EpisodeRecord> records, const json& view) {
  const std::string type = view.value("type", std::string("tabular"));
  std::vector<std::string> by;
  std::vector<std::string> metrics;
  if (type == "tabular") {
    by = view.contains("by") ? string_list(view["by"]) : std::vector<std::string>{"num_agents"};
    metrics = view.contains("metrics") ? string_list(view["metrics"])
                                       : std::vector<std::string>{"csr", "SoC", "makespan", "throughput"};
  } else if (type == "plot") {
    by = {view.value("x", std::string("num_agents"))};
    metrics = {view.value("y", std::string("csr"))};
  } else {
    throw std::invalid_argument("unknown view type '" + type + "'");
  }
  std::erase(by, "algorithm");
  std::map<std::vector<std::string>, std::vector<const EpisodeRecord*>> groups;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    std::vector<std::string> key{r.algorithm_alias};
    for (const auto& f : by) key.push_back(group_field(r, f));
    groups[key].push_back(&r);
  }
  std::ostringstream out;
  out.precision(17);
  out << "algorithm";
  for (const auto& f : by) out << ',' << f;
  for (const auto& m : metrics) out << ',' << m << ',' << m << "_ci95";
  out << ",episodes\n";
  for (const auto& [key, rs] : groups) {
    for (std::size_t i = 0; i < key.size(); ++i) out << (i ? "," : "") << key[i];
    for (const auto& m : metrics) {
      std::vector<double> xs;
      xs.reserve(rs.size());
      for (const auto* r : rs) xs.push_back(metric_value(*r, m));
      const auto e = aggregate_ci(xs);
      out << ',' << e.mean << ',' << e.half_width;
    }
    out << ',' << rs.size() << '\n';
  }
  return out.str();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> render_views(std::span<const EpisodeRecord> records,
                                                              const json& views) {
  std::vector<std::pair<std::string, std::string>> out;
  if (views.is_null()) return out;
  if (views.is_object()) {
    for (const auto& [name, view] : views.items()) out.emplace_back(name, render_view(records, view));
  } else if (views.is_array()) {
    for (std::size_t i = 0; i < views.size(); ++i) {
      const auto& view = views[i];
      if (!view.is_object()) throw std::invalid_argument("each view must be a mapping");
      out.emplace_back(view.value("name", "view-" + std::to_string(i)), render_view(records, view));
    }
  } else {
    throw std::invalid_argument("views must be a list or a mapping");
  }
  return out;
}

void write_report(std::span<const EpisodeRecord> records, const json& views, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto report = compute_report(records);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << text;
  };
  write("metrics.csv", to_csv(report));
  write("metrics.json", to_json(report).dump(2) + "\n");
  write("radar.json", radar_data(report).dump(2) + "\n");
  for (const auto& [name, csv] : render_views(records, views)) write("view-" + name + ".csv", csv);
}

}  // namespace mapf
