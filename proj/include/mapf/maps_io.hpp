#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mapf/core.hpp"
#include "mapf/grid.hpp"

namespace mapf {

// ---------------------------------------------------------------------------
// Map text formats

/// Rectangular block of '.' (free) and '#' (obstacle) rows. An optional first
/// line "! name" names the map.
MapGrid parse_ascii(std::string_view text);
std::string to_ascii(const MapGrid& map);

/// MovingAI `.map` format. Passable terrain is '.' and 'G'; everything else
/// ('@', 'O', 'T', 'S', 'W', ...) is an obstacle.
MapGrid ingest_movingai(std::string_view text, std::string name = {});

/// Non-overlapping row-major tiles named "<parent>-<index>".
std::vector<MapGrid> slice_tiles(const MapGrid& map, int tile);

// ---------------------------------------------------------------------------
// Instance sampling

struct Placement {
  std::vector<Cell> starts;
  std::vector<Cell> goals;
};

inline constexpr int kPlacementAttempts = 10'000;

/// Uniform start/goal draws over free cells with rejection; every goal is
/// reachable from its start and differs from it. Throws InstanceError when an
/// agent cannot be placed within kPlacementAttempts draws.
Placement sample_instance(const MapGrid& map, int num_agents, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Registry

class MapRegistry {
 public:
  void add(std::string name, MapGrid map);
  std::shared_ptr<const MapGrid> find(const std::string& name) const;
  /// Throws InstanceError for unknown names.
  std::shared_ptr<const MapGrid> resolve(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const MapGrid>, std::less<>> maps_;
};

/// Loads every `*.map` file of a directory (ASCII format) into the registry,
/// keyed by the "! name" line or else the file stem. Returns the count.
std::size_t load_map_directory(MapRegistry& registry, const std::filesystem::path& dir);

/// Generated benchmark families: random-000..127, mazes-000..127, warehouse,
/// puzzle-00..15.
void register_benchmark_maps(MapRegistry& registry);

inline constexpr int kBenchmarkMapsPerFamily = 128;
std::string benchmark_map_name(std::string_view family, int index);
std::vector<std::string> puzzle_maps_ascii();

// ---------------------------------------------------------------------------
// Evaluation configs

enum class DatasetTag { Random, Mazes, Warehouse, Puzzles, Cities, CitiesTiles, Custom };
std::string_view to_string(DatasetTag tag) noexcept;
DatasetTag dataset_tag_from_string(std::string_view text);

struct InstanceSpec {
  std::string map_name;
  std::uint64_t seed = 0;
  int num_agents = 1;
  int max_episode_steps = 128;
  ProblemKind problem = ProblemKind::Mapf;
  DatasetTag dataset_tag = DatasetTag::Custom;
  OnTarget on_target = OnTarget::Nothing;
  CollisionSystem collision_system = CollisionSystem::Soft;
  int obs_radius = 5;

  /// Stable identity used to match episodes across algorithms.
  std::string key() const;
  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

struct AlgorithmSpec {
  std::string alias;
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

/// One map set of the environment section. Every field is a grid_search
/// list; scalars in the file become single-element lists.
struct EnvironmentBlock {
  DatasetTag dataset = DatasetTag::Custom;
  std::vector<std::string> map_names;
  std::vector<int> num_agents{1};
  std::vector<std::uint64_t> seeds{0};
  std::vector<int> max_episode_steps{128};
  std::vector<int> obs_radius{5};
  std::vector<CollisionSystem> collision_systems{CollisionSystem::Soft};
  std::vector<OnTarget> on_targets{OnTarget::Nothing};

  std::size_t combinations() const noexcept;
};

struct EvalConfig {
  std::vector<EnvironmentBlock> environment;
  std::vector<AlgorithmSpec> algorithms;
  nlohmann::json views = nlohmann::json::array();
  /// Raw source text; hashed into the run manifest.
  std::string source;

  /// Throws std::invalid_argument on empty grid_search lists or duplicate aliases.
  void validate() const;
};

/// Parses YAML (or JSON) text with top-level keys environment, algorithms, views.
EvalConfig parse_eval_config(std::string_view text);
EvalConfig load_eval_config(const std::filesystem::path& path);
std::string to_yaml(const EvalConfig& config);

/// Cartesian product of every block's grid_search lists; maps outermost,
/// then agent counts, seeds innermost. Throws InstanceError for unknown maps
/// or agent counts exceeding a map's free cells.
std::vector<InstanceSpec> expand_config(const EvalConfig& config, const MapRegistry& registry);

/// The six-family benchmark suite: 3376 instances per scenario.
/// Cities blocks stay single-agent MAPF in the lifelong scenario.
EvalConfig benchmark_suite_config(ProblemKind problem, std::vector<AlgorithmSpec> algorithms = {});

}  // namespace mapf
