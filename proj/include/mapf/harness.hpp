#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "mapf/maps_io.hpp"
#include "mapf/record.hpp"
#include "mapf/solvers.hpp"
#include "mapf/viz.hpp"

namespace mapf {

std::string_view code_version() noexcept;

/// Policy factory for the algorithm names random (param seed), a_star,
/// greedy and prioritized (params window, horizon). Seeded policies mix
/// their seed with the instance seed. Throws std::invalid_argument for
/// unknown names or bad parameters.
std::unique_ptr<Policy> make_policy(const AlgorithmSpec& algorithm, std::uint64_t instance_seed);

GridConfig instance_config(const InstanceSpec& spec, std::shared_ptr<const MapGrid> map);

/// Simulates one episode to its end. The runtime covers policy decisions and
/// environment steps only. Instance construction failures are rethrown as
/// InstanceError naming the instance.
EpisodeRecord run_instance(const InstanceSpec& spec, std::shared_ptr<const MapGrid> map, Policy& policy,
                           const AlgorithmSpec& algorithm, Trajectory* trajectory = nullptr);
EpisodeRecord run_instance(const InstanceSpec& spec, const MapRegistry& registry, const AlgorithmSpec& algorithm,
                           Trajectory* trajectory = nullptr);

struct RunManifest {
  std::string config_digest;
  std::string code_version;
  std::string started_at;
  std::string finished_at;
  int workers = 1;
  std::size_t record_count = 0;
  std::size_t error_count = 0;

  nlohmann::json to_json() const;
};

struct SuiteResult {
  std::vector<EpisodeRecord> records;
  RunManifest manifest;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (instance, algorithm) pair on `workers` threads. Records come
/// back in canonical order: instances as expanded, algorithms as listed.
/// Failures become error records.
SuiteResult run_suite(const EvalConfig& config, const MapRegistry& registry, int workers,
                      const ProgressFn& progress = {});

// JSON Lines persistence. Loading reports the failing line number.
void write_records(std::ostream& out, std::span<const EpisodeRecord> records);
std::vector<EpisodeRecord> read_records(std::istream& in);
void persist_records(const std::filesystem::path& path, std::span<const EpisodeRecord> records);
std::vector<EpisodeRecord> load_records(const std::filesystem::path& path);

struct BenchResult {
  double ops = 0.0;
  double sps = 0.0;
  std::int64_t steps = 0;
  std::int64_t observations = 0;
  std::int64_t episodes = 0;
  double elapsed_seconds = 0.0;
};

/// Random-policy throughput with observations built for every active agent
/// after each step. Episodes auto-reset on the same map with seed + k.
/// Stops after `duration_seconds` or `max_steps`, whichever comes first.
BenchResult bench_speed(GridConfig config, double duration_seconds, std::int64_t max_steps = -1);

/// Re-simulates a record's episode (deterministic) and returns its trajectory.
Trajectory replay(const EpisodeRecord& record, const MapRegistry& registry);

/// Aggregation tables requested by the config's views section, name -> CSV.
/// A view is {type: tabular|plot, by: [fields] | x: field, metrics: [..] | y: metric}.
std::vector<std::pair<std::string, std::string>> render_views(std::span<const EpisodeRecord> records,
                                                              const nlohmann::json& views);

/// Writes metrics.csv, metrics.json, radar.json and one CSV per view.
void write_report(std::span<const EpisodeRecord> records, const nlohmann::json& views,
                  const std::filesystem::path& dir);

}  // namespace mapf
