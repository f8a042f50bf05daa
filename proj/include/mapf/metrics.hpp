#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mapf/record.hpp"

namespace mapf {

/// MAPF: solved ? best / value : 0 (lower SoC is better).
/// LMAPF: value / best (higher throughput is better); `solved` is ignored.
/// Throws std::invalid_argument for best <= 0.
double ratio_score(double value, double best, ProblemKind problem, bool solved);

/// 1 - collisions / (agents * length), floored at 0.
double coordination(std::int64_t collisions, int num_agents, int episode_length);

/// optimal / actual; 0 when no path was found. A start already on its goal
/// scores 1.
double pathfinding(bool found, double path_cost, double optimal_cost);

/// Geometric mean over consecutive agent-count pairs of
/// (runtime(a1) / runtime(a2)) / (a1 / a2). Repeated counts are averaged.
double scalability(std::span<const std::pair<int, double>> runtimes);

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t samples = 0;
};

/// Mean and 1.96 * sample standard error.
Estimate aggregate_ci(std::span<const double> samples);

enum class MetaMetric { Performance, OutOfDistribution, Cooperation, Scalability, Coordination, Pathfinding };
inline constexpr MetaMetric kMetaMetrics[] = {MetaMetric::Performance,  MetaMetric::OutOfDistribution,
                                              MetaMetric::Cooperation,  MetaMetric::Scalability,
                                              MetaMetric::Coordination, MetaMetric::Pathfinding};
std::string_view to_string(MetaMetric m) noexcept;
/// Dataset families each meta-metric is computed on.
std::vector<DatasetTag> metric_datasets(MetaMetric m);

/// Per-algorithm per-episode ratio scores over the records of the given
/// datasets, best taken per instance across algorithms. Throws
/// std::invalid_argument when algorithms were run on different instances.
std::map<std::string, std::vector<double>> ratio_scores(std::span<const EpisodeRecord> records,
                                                        std::span<const DatasetTag> datasets);

/// Per-algorithm pairwise scalability scores from warehouse runtimes.
std::map<std::string, std::vector<double>> scalability_scores(std::span<const EpisodeRecord> records);

struct MetricReport {
  struct Provenance {
    std::vector<DatasetTag> datasets;
    std::size_t episodes = 0;
  };
  /// algorithm alias -> metric -> estimate; metrics without data are absent.
  std::map<std::string, std::map<MetaMetric, Estimate>> scores;
  std::map<MetaMetric, Provenance> provenance;

  std::optional<Estimate> get(const std::string& alias, MetaMetric m) const;
};

/// Builds all six meta-metrics. Error records count as unsolved episodes.
MetricReport compute_report(std::span<const EpisodeRecord> records);

nlohmann::json to_json(const MetricReport& report);
/// One row per algorithm: alias, then mean and CI half-width per metric.
std::string to_csv(const MetricReport& report);
/// metric name -> alias -> mean, the data behind a radar chart.
nlohmann::json radar_data(const MetricReport& report);

}  // namespace mapf
