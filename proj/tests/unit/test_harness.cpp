#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapf/errors.hpp"
#include "mapf/harness.hpp"
#include "mapf/metrics.hpp"
#include "oracles.hpp"

using namespace mapf;

namespace {

const MapRegistry& registry() {
  static const auto reg = [] {
    auto r = std::make_unique<MapRegistry>();
    register_benchmark_maps(*r);
    r->add("empty5", MapGrid(5, 5, std::vector<std::uint8_t>(25, 0)));
    return r;
  }();
  return *reg;
}

EvalConfig small_config() {
  return parse_eval_config(R"(
environment:
  dataset: random
  map_name: {grid_search: [random-000, random-001, random-002, random-003]}
  num_agents: {grid_search: [2, 8]}
  seed: {grid_search: [0, 1]}
  max_episode_steps: 48
algorithms:
  astar: {name: a_star}
  prio: {name: prioritized, params: {window: 4, horizon: 12}}
  rnd: {name: random, params: {seed: 5}}
)");
}

EpisodeRecord strip_runtime(EpisodeRecord r) {
  r.runtime_seconds = 0;
  return r;
}

}  // namespace

TEST_CASE("policy factory") {
  CHECK(make_policy({"a", "random", {{"seed", 3}}}, 1)->name() == "random");
  CHECK(make_policy({"a", "a_star", {}}, 1)->name() == "a_star");
  CHECK(make_policy({"a", "greedy", {}}, 1)->name() == "greedy");
  CHECK(make_policy({"a", "prioritized", {{"window", 2}, {"horizon", 6}}}, 1)->name() == "prioritized");
  CHECK_THROWS_AS(make_policy({"a", "lacam", {}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_policy({"a", "prioritized", {{"window", "x"}}}, 1), std::invalid_argument);
}

TEST_CASE("run_instance: bounds, BFS cost and determinism") {
  InstanceSpec spec;
  spec.map_name = "empty5";
  spec.max_episode_steps = 128;
  spec.seed = 3;
  const auto rnd = run_instance(spec, registry(), {"r", "random", {{"seed", 1}}});
  CHECK(rnd.makespan <= 128);
  CHECK(rnd.runtime_seconds > 0);

  const auto astar = run_instance(spec, registry(), {"a", "a_star", {}});
  const Env env(instance_config(spec, registry().resolve("empty5")));
  CHECK(astar.soc == oracle::distance(env.grid(), env.positions()[0], env.goals()[0]));
  CHECK(astar.per_agent_optimal_costs == std::vector<int>{static_cast<int>(astar.soc)});

  const auto again = run_instance(spec, registry(), {"r", "random", {{"seed", 1}}});
  CHECK(strip_runtime(again) == strip_runtime(rnd));

  spec.num_agents = 30;
  CHECK_THROWS_WITH_AS(run_instance(spec, registry(), {"a", "a_star", {}}), doctest::Contains("empty5"), InstanceError);
}

TEST_CASE("lifelong record throughput") {
  InstanceSpec spec;
  spec.map_name = "random-004";
  spec.num_agents = 8;
  spec.max_episode_steps = 64;
  spec.on_target = OnTarget::Restart;
  spec.problem = ProblemKind::Lmapf;
  const auto r = run_instance(spec, registry(), {"g", "greedy", {}});
  CHECK(r.episode_length == 64);
  CHECK(r.throughput == static_cast<double>(r.goals_achieved) / 64.0);
}

TEST_CASE("suite order and worker independence") {
  const auto cfg = small_config();
  const auto one = run_suite(cfg, registry(), 1);
  const auto four = run_suite(cfg, registry(), 4);
  REQUIRE(one.records.size() == 4 * 2 * 2 * 3);
  CHECK(one.manifest.record_count == one.records.size());
  CHECK(one.manifest.config_digest == four.manifest.config_digest);
  CHECK(four.manifest.workers == 4);
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(strip_runtime(one.records[i]) == strip_runtime(four.records[i]));
  }
  CHECK(one.records[0].algorithm_alias == "astar");
  CHECK(one.records[1].algorithm_alias == "prio");
  CHECK(one.records[3].instance.seed == 1);
  const auto report_one = to_json(compute_report(one.records));
  const auto report_four = to_json(compute_report(four.records));
  CHECK(report_one["algorithms"]["prio"]["coordination"] == report_four["algorithms"]["prio"]["coordination"]);
  CHECK(report_one["algorithms"]["prio"]["performance"] == report_four["algorithms"]["prio"]["performance"]);
}

TEST_CASE("a failing pair becomes an error record") {
  auto cfg = small_config();
  cfg.algorithms.push_back({"broken", "no_such_solver", {}});
  const auto res = run_suite(cfg, registry(), 2);
  CHECK(res.records.size() == 64);
  CHECK(res.manifest.error_count == 16);
  CHECK_FALSE(res.records[3].ok());
  CHECK(res.records[3].error->find("no_such_solver") != std::string::npos);
}

TEST_CASE("jsonl round trip") {
  std::vector<EpisodeRecord> records;
  CounterRng rng(1, Stream::Policy);
  for (int i = 0; i < 1000; ++i) {
    EpisodeRecord r;
    r.instance.map_name = "m" + std::to_string(i % 7);
    r.instance.seed = rng.next();
    r.instance.num_agents = 1 + static_cast<int>(rng.below(64));
    r.instance.dataset_tag = static_cast<DatasetTag>(rng.below(7));
    r.instance.on_target = static_cast<OnTarget>(rng.below(3));
    r.instance.problem = r.instance.on_target == OnTarget::Restart ? ProblemKind::Lmapf : ProblemKind::Mapf;
    r.instance.collision_system = rng.below(2) ? CollisionSystem::Soft : CollisionSystem::BlockAll;
    r.algorithm_alias = "alg" + std::to_string(i % 3);
    r.algorithm_name = "random";
    r.algorithm_params = {{"seed", i}};
    r.soc = static_cast<std::int64_t>(rng.below(100000));
    r.makespan = static_cast<int>(rng.below(256));
    r.csr = rng.below(2) == 1;
    r.goals_achieved = static_cast<std::int64_t>(rng.below(500));
    r.throughput = rng.unit();
    r.collisions = {static_cast<std::int64_t>(rng.below(10)), static_cast<std::int64_t>(rng.below(10)),
                    static_cast<std::int64_t>(rng.below(10))};
    r.runtime_seconds = rng.unit() * 1e-3 + 1e-9;
    r.episode_length = static_cast<int>(rng.below(256));
    for (int a = 0; a < 3; ++a) {
      r.per_agent_goal_times.push_back(rng.below(2) ? std::optional<int>(static_cast<int>(rng.below(99))) : std::nullopt);
      r.per_agent_optimal_costs.push_back(static_cast<int>(rng.below(50)));
    }
    if (i % 97 == 0) r.error = "boom " + std::to_string(i);
    records.push_back(r);
  }
  std::stringstream buf;
  write_records(buf, records);
  CHECK(read_records(buf) == records);

  std::stringstream empty;
  write_records(empty, {});
  CHECK(empty.str().empty());
  CHECK(read_records(empty).empty());

  std::stringstream out;
  write_records(out, std::span(records).first(3));
  auto text = out.str();
  text.resize(text.size() - 40);
  std::stringstream truncated(text);
  CHECK_THROWS_WITH_AS(read_records(truncated), doctest::Contains("line 3"), ParseError);

  const auto path = std::filesystem::temp_directory_path() / "mapf_records_test.jsonl";
  persist_records(path, records);
  CHECK(load_records(path) == records);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_records(path), IoError);
}

TEST_CASE("bench speed counts observations per agent") {
  GridConfig cfg;
  cfg.width = 16;
  cfg.height = 16;
  cfg.num_agents = 16;
  cfg.max_episode_steps = 50;
  const auto r = bench_speed(cfg, 10.0, 500);
  CHECK(r.steps == 500);
  CHECK(r.observations == 16 * 500);
  CHECK(r.ops == doctest::Approx(16 * r.sps));
  CHECK(r.episodes == 11);  // ten finished, one in progress
  cfg.num_agents = 1;
  const auto single = bench_speed(cfg, 10.0, 200);
  CHECK(single.ops == doctest::Approx(single.sps));
  CHECK_THROWS_AS(bench_speed(cfg, 0.0), std::invalid_argument);
}

TEST_CASE("replay reproduces the recorded episode") {
  InstanceSpec spec;
  spec.map_name = "mazes-003";
  spec.num_agents = 6;
  spec.max_episode_steps = 40;
  Trajectory direct;
  const auto rec = run_instance(spec, registry(), {"p", "prioritized", {}}, &direct);
  const auto again = replay(rec, registry());
  CHECK(again.positions == direct.positions);
  CHECK(static_cast<int>(direct.steps()) == rec.episode_length + 1);
}

TEST_CASE("views and report files") {
  const auto cfg = parse_eval_config(R"(
environment:
  dataset: mazes
  map_name: {grid_search: [mazes-000, mazes-001]}
  num_agents: {grid_search: [2, 4]}
  max_episode_steps: 32
algorithms:
  a: {name: a_star}
views:
  table: {type: tabular, by: [num_agents], metrics: [csr, SoC]}
  curve: {type: plot, x: num_agents, y: makespan}
)");
  const auto res = run_suite(cfg, registry(), 1);
  const auto views = render_views(res.records, cfg.views);
  REQUIRE(views.size() == 2);
  CHECK(views[0].first == "curve");
  CHECK(views[1].second.rfind("algorithm,num_agents,csr,csr_ci95,SoC,SoC_ci95,episodes\n", 0) == 0);
  CHECK(count_if(views[1].second.begin(), views[1].second.end(), [](char c) { return c == '\n'; }) == 3);
  CHECK_THROWS_AS(render_views(res.records, nlohmann::json::parse(R"([{"type": "pie"}])")), std::invalid_argument);

  const auto dir = std::filesystem::temp_directory_path() / "mapf_report_test";
  std::filesystem::remove_all(dir);
  write_report(res.records, cfg.views, dir);
  for (const char* f : {"metrics.csv", "metrics.json", "radar.json", "view-table.csv", "view-curve.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::filesystem::remove_all(dir);
}
