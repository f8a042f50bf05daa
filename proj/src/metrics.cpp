#include "mapf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mapf {

double ratio_score(double value, double best, ProblemKind problem, bool solved) {
  if (!(best > 0.0)) throw std::invalid_argument("ratio_score: best must be positive");
  if (problem == ProblemKind::Mapf) {
    if (!solved) return 0.0;
    if (!(value > 0.0)) throw std::invalid_argument("ratio_score: SoC must be positive");
    return std::min(1.0, best / value);
  }
  return std::clamp(value / best, 0.0, 1.0);
}

double coordination(std::int64_t collisions, int num_agents, int episode_length) {
  if (episode_length <= 0 || num_agents <= 0) throw std::invalid_argument("coordination: empty episode");
  const double budget = static_cast<double>(num_agents) * static_cast<double>(episode_length);
  return std::max(0.0, 1.0 - static_cast<double>(collisions) / budget);
}

double pathfinding(bool found, double path_cost, double optimal_cost) {
  if (!found) return 0.0;
  if (path_cost < optimal_cost) throw std::invalid_argument("pathfinding: path shorter than the optimal cost");
  if (path_cost == 0.0) return 1.0;
  return optimal_cost / path_cost;
}

namespace {

std::vector<double> pair_ratios(std::span<const std::pair<int, double>> runtimes) {
  std::map<int, std::pair<double, int>> by_count;
  for (const auto& [agents, seconds] : runtimes) {
    if (agents <= 0 || !(seconds > 0.0)) throw std::invalid_argument("scalability: counts and runtimes must be positive");
    auto& slot = by_count[agents];
    slot.first += seconds;
    ++slot.second;
  }
  if (by_count.size() < 2) throw std::invalid_argument("scalability: needs at least two distinct agent counts");
  std::vector<double> ratios;
  auto prev = by_count.begin();
  for (auto it = std::next(prev); it != by_count.end(); prev = it++) {
    const double r1 = prev->second.first / prev->second.second;
    const double r2 = it->second.first / it->second.second;
    ratios.push_back((r1 / r2) / (static_cast<double>(prev->first) / it->first));
  }
  return ratios;
}

double geometric_mean(std::span<const double> xs) {
  double log_sum = 0.0;
  for (const double x : xs) log_sum += std::log(x);
  return std::exp(log_sum / static_cast<double>(xs.size()));
}

}  // namespace

double scalability(std::span<const std::pair<int, double>> runtimes) {
  const auto ratios = pair_ratios(runtimes);
  return geometric_mean(ratios);
}

Estimate aggregate_ci(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("aggregate_ci: no samples");
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (const double x : samples) sum += x;
  const double mean = sum / n;
  if (samples.size() == 1) return {mean, 0.0, 1};
  double ss = 0.0;
  for (const double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n), samples.size()};
}

std::string_view to_string(MetaMetric m) noexcept {
  switch (m) {
    case MetaMetric::Performance: return "performance";
    case MetaMetric::OutOfDistribution: return "out_of_distribution";
    case MetaMetric::Cooperation: return "cooperation";
    case MetaMetric::Scalability: return "scalability";
    case MetaMetric::Coordination: return "coordination";
    case MetaMetric::Pathfinding: return "pathfinding";
  }
  return "?";
}

std::vector<DatasetTag> metric_datasets(MetaMetric m) {
  switch (m) {
    case MetaMetric::Performance:
    case MetaMetric::Coordination: return {DatasetTag::Random, DatasetTag::Mazes};
    case MetaMetric::OutOfDistribution: return {DatasetTag::CitiesTiles};
    case MetaMetric::Cooperation: return {DatasetTag::Puzzles};
    case MetaMetric::Scalability: return {DatasetTag::Warehouse};
    case MetaMetric::Pathfinding: return {DatasetTag::Cities};
  }
  return {};
}

namespace {

bool in_datasets(const EpisodeRecord& r, std::span<const DatasetTag> datasets) {
  return std::find(datasets.begin(), datasets.end(), r.instance.dataset_tag) != datasets.end();
}

}  // namespace

std::map<std::string, std::vector<double>> ratio_scores(std::span<const EpisodeRecord> records,
                                                        std::span<const DatasetTag> datasets) {
  std::map<std::string, std::map<std::string, const EpisodeRecord*>> by_instance;
  std::set<std::string> aliases;
  for (const auto& r : records) {
    if (!in_datasets(r, datasets)) continue;
    aliases.insert(r.algorithm_alias);
    auto& slot = by_instance[r.instance.key()][r.algorithm_alias];
    if (slot) throw std::invalid_argument("duplicate record for instance " + r.instance.key() + " / " + r.algorithm_alias);
    slot = &r;
  }
  std::map<std::string, std::vector<double>> scores;
  for (const auto& alias : aliases) scores[alias];
  for (const auto& [key, runs] : by_instance) {
    if (runs.size() != aliases.size()) {
      throw std::invalid_argument("mismatched instance sets: instance " + key + " was not run by every algorithm");
    }
    const ProblemKind problem = runs.begin()->second->instance.problem;
    if (problem == ProblemKind::Mapf) {
      std::optional<std::int64_t> best;
      for (const auto& [alias, r] : runs) {
        if (r->ok() && r->csr && (!best || r->soc < *best)) best = r->soc;
      }
      for (const auto& [alias, r] : runs) {
        const bool solved = r->ok() && r->csr;
        scores[alias].push_back(best ? ratio_score(static_cast<double>(r->soc), static_cast<double>(*best), problem, solved)
                                     : 0.0);
      }
    } else {
      double best = 0.0;
      for (const auto& [alias, r] : runs) {
        if (r->ok()) best = std::max(best, r->throughput);
      }
      for (const auto& [alias, r] : runs) {
        if (!r->ok()) {
          scores[alias].push_back(0.0);
        } else {
          scores[alias].push_back(best > 0.0 ? ratio_score(r->throughput, best, problem, true) : 1.0);
        }
      }
    }
  }
  return scores;
}

std::map<std::string, std::vector<double>> scalability_scores(std::span<const EpisodeRecord> records) {
  std::map<std::string, std::vector<std::pair<int, double>>> runtimes;
  for (const auto& r : records) {
    if (r.instance.dataset_tag != DatasetTag::Warehouse || !r.ok()) continue;
    runtimes[r.algorithm_alias].emplace_back(r.instance.num_agents, r.runtime_seconds);
  }
  std::map<std::string, std::vector<double>> out;
  for (const auto& [alias, points] : runtimes) {
    std::set<int> counts;
    for (const auto& p : points) counts.insert(p.first);
    if (counts.size() >= 2) out[alias] = pair_ratios(points);
  }
  return out;
}

std::optional<Estimate> MetricReport::get(const std::string& alias, MetaMetric m) const {
  const auto it = scores.find(alias);
  if (it == scores.end()) return std::nullopt;
  const auto jt = it->second.find(m);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

MetricReport compute_report(std::span<const EpisodeRecord> records) {
  MetricReport report;
  for (const auto& r : records) report.scores[r.algorithm_alias];

  auto store = [&](MetaMetric m, const std::map<std::string, std::vector<double>>& samples) {
    auto& prov = report.provenance[m];
    prov.datasets = metric_datasets(m);
    for (const auto& [alias, xs] : samples) {
      if (xs.empty()) continue;
      report.scores[alias][m] = aggregate_ci(xs);
      prov.episodes += xs.size();
    }
  };

  for (const MetaMetric m : {MetaMetric::Performance, MetaMetric::OutOfDistribution, MetaMetric::Cooperation}) {
    const auto tags = metric_datasets(m);
    store(m, ratio_scores(records, tags));
  }

  {
    const auto pairs = scalability_scores(records);
    auto& prov = report.provenance[MetaMetric::Scalability];
    prov.datasets = metric_datasets(MetaMetric::Scalability);
    for (const auto& [alias, ratios] : pairs) {
      Estimate e = aggregate_ci(ratios);
      e.mean = geometric_mean(ratios);
      report.scores[alias][MetaMetric::Scalability] = e;
    }
    for (const auto& r : records) {
      if (r.instance.dataset_tag == DatasetTag::Warehouse && r.ok() && pairs.contains(r.algorithm_alias)) ++prov.episodes;
    }
  }

  {
    const auto tags = metric_datasets(MetaMetric::Coordination);
    std::map<std::string, std::vector<double>> samples;
    for (const auto& r : records) {
      if (!in_datasets(r, tags) || !r.ok() || r.episode_length <= 0) continue;
      samples[r.algorithm_alias].push_back(coordination(r.collisions.total(), r.instance.num_agents, r.episode_length));
    }
    store(MetaMetric::Coordination, samples);
  }

  {
    std::map<std::string, std::vector<double>> samples;
    for (const auto& r : records) {
      if (r.instance.dataset_tag != DatasetTag::Cities || r.instance.num_agents != 1) continue;
      if (!r.ok() || r.per_agent_goal_times.empty() || r.per_agent_optimal_costs.empty()) {
        samples[r.algorithm_alias].push_back(0.0);
        continue;
      }
      const auto& t = r.per_agent_goal_times.front();
      samples[r.algorithm_alias].push_back(
          pathfinding(t.has_value(), t.value_or(0), static_cast<double>(r.per_agent_optimal_costs.front())));
    }
    store(MetaMetric::Pathfinding, samples);
  }
  return report;
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json algorithms = nlohmann::json::object();
  for (const auto& [alias, metrics] : report.scores) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [m, e] : metrics) {
      entry[std::string(to_string(m))] = {{"mean", e.mean}, {"ci95", e.half_width}, {"samples", e.samples}};
    }
    algorithms[alias] = std::move(entry);
  }
  nlohmann::json provenance = nlohmann::json::object();
  for (const auto& [m, p] : report.provenance) {
    nlohmann::json tags = nlohmann::json::array();
    for (const auto t : p.datasets) tags.push_back(std::string(to_string(t)));
    provenance[std::string(to_string(m))] = {{"datasets", tags}, {"episodes", p.episodes}};
  }
  return {{"algorithms", algorithms}, {"provenance", provenance}};
}

std::string to_csv(const MetricReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "algorithm";
  for (const auto m : kMetaMetrics) out << ',' << to_string(m) << ',' << to_string(m) << "_ci95";
  out << '\n';
  for (const auto& [alias, metrics] : report.scores) {
    out << alias;
    for (const auto m : kMetaMetrics) {
      const auto it = metrics.find(m);
      if (it == metrics.end()) {
        out << ",,";
      } else {
        out << ',' << it->second.mean << ',' << it->second.half_width;
      }
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json radar_data(const MetricReport& report) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto m : kMetaMetrics) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [alias, metrics] : report.scores) {
      if (const auto it = metrics.find(m); it != metrics.end()) row[alias] = it->second.mean;
    }
    out[std::string(to_string(m))] = std::move(row);
  }
  return out;
}

}  // namespace mapf
