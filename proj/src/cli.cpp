#include "mapf/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mapf/errors.hpp"
#include "mapf/harness.hpp"
#include "mapf/mapgen.hpp"
#include "mapf/maps_io.hpp"
#include "mapf/metrics.hpp"
#include "mapf/viz.hpp"

namespace fs = std::filesystem;

namespace mapf {
namespace {

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string() + " (file missing or unreadable)");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void fill_registry(MapRegistry& registry, const std::string& maps_dir) {
  register_benchmark_maps(registry);
  if (!maps_dir.empty()) load_map_directory(registry, maps_dir);
}

struct GenerateArgs {
  std::string family;
  int width = 21;
  int height = 21;
  double density = 0.3;
  double loop_prob = 0.1;
  std::uint64_t seed = 0;
  std::string name;
  std::string out;
};

struct IngestArgs {
  std::string movingai;
  int tile = 0;
  std::string name;
  std::string out;
};

struct RunArgs {
  std::string config;
  int workers = 1;
  std::string out;
  std::string maps;
};

struct BenchArgs {
  int agents = 64;
  int size = 32;
  double duration = 1.0;
  double density = 0.3;
  int radius = 5;
  int max_episode_steps = 256;
  std::uint64_t seed = 0;
};

struct RenderArgs {
  std::string results;
  std::string instance;
  std::string algorithm;
  std::string out;
  std::string maps;
  int frame = -1;
  double step_duration = 0.3;
  bool console = false;
};

struct ReportArgs {
  std::vector<std::string> results;
  std::string out;
  std::string config;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  std::optional<MapGrid> map;
  if (a.family == "random") {
    map = gen_random(a.width, a.height, a.density, a.seed);
  } else if (a.family == "maze") {
    map = gen_maze(a.width, a.height, a.seed, a.loop_prob);
  } else {
    map = gen_warehouse();
  }
  const std::string name = a.name.empty() ? a.family + "-" + std::to_string(a.seed) : a.name;
  const auto text = to_ascii(map->renamed(name, map->family()));
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
    out << "wrote " << a.out << " (" << map->height() << "x" << map->width() << ", " << map->free_count()
        << " free cells)\n";
  }
  return kExitOk;
}

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  const fs::path src(a.movingai);
  const std::string name = a.name.empty() ? src.stem().string() : a.name;
  const MapGrid map = ingest_movingai(read_file(src), name);
  fs::create_directories(a.out);
  write_file(fs::path(a.out) / (name + ".map"), to_ascii(map));
  std::size_t tiles = 0;
  if (a.tile > 0) {
    for (const auto& t : slice_tiles(map, a.tile)) {
      write_file(fs::path(a.out) / (t.name() + ".map"), to_ascii(t));
      ++tiles;
    }
  }
  out << "ingested " << name << " (" << map.height() << "x" << map.width() << ")";
  if (a.tile > 0) out << " and " << tiles << " tiles of " << a.tile << "x" << a.tile;
  out << " into " << a.out << '\n';
  return kExitOk;
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const auto config = parse_eval_config(read_file(a.config));
  MapRegistry registry;
  fill_registry(registry, a.maps);
  std::size_t last_percent = 0;
  const auto suite = run_suite(config, registry, a.workers, [&](std::size_t done, std::size_t total) {
    const auto percent = done * 100 / total;
    if (percent >= last_percent + 10 || done == total) {
      err << "progress " << done << "/" << total << '\n';
      last_percent = percent;
    }
  });
  persist_records(a.out, suite.records);
  write_file(a.out + ".manifest.json", suite.manifest.to_json().dump(2) + "\n");
  out << "wrote " << suite.records.size() << " records to " << a.out;
  if (suite.manifest.error_count) out << " (" << suite.manifest.error_count << " errors)";
  out << '\n';
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  GridConfig cfg;
  cfg.width = a.size;
  cfg.height = a.size;
  cfg.density = a.density;
  cfg.num_agents = a.agents;
  cfg.obs_radius = a.radius;
  cfg.max_episode_steps = a.max_episode_steps;
  cfg.seed = a.seed;
  cfg.validate();
  const auto res = bench_speed(cfg, a.duration);
  out << "agents " << a.agents << " size " << a.size << "x" << a.size << '\n';
  out << "steps " << res.steps << " observations " << res.observations << " elapsed " << res.elapsed_seconds << " s\n";
  out << "SPS " << static_cast<std::int64_t>(res.sps) << '\n';
  out << "OPS " << static_cast<std::int64_t>(res.ops) << '\n';
  return kExitOk;
}

const EpisodeRecord& select_record(const std::vector<EpisodeRecord>& records, const RenderArgs& a) {
  std::size_t index = 0;
  const auto* first = a.instance.data();
  const auto* last = first + a.instance.size();
  if (const auto [ptr, ec] = std::from_chars(first, last, index); ec == std::errc{} && ptr == last) {
    if (index >= records.size()) {
      throw std::invalid_argument("record index " + a.instance + " out of range (file has " +
                                  std::to_string(records.size()) + " records)");
    }
    return records[index];
  }
  for (const auto& r : records) {
    if (r.instance.key() == a.instance && (a.algorithm.empty() || r.algorithm_alias == a.algorithm)) return r;
  }
  throw std::invalid_argument("no record matches instance '" + a.instance + "'" +
                              (a.algorithm.empty() ? "" : " and algorithm '" + a.algorithm + "'") +
                              "; pass a record index or an instance key");
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const auto records = load_records(a.results);
  const auto& record = select_record(records, a);
  MapRegistry registry;
  fill_registry(registry, a.maps);
  const auto trajectory = replay(record, registry);
  if (a.console) {
    const auto t = a.frame < 0 ? trajectory.steps() - 1 : static_cast<std::size_t>(a.frame);
    if (t >= trajectory.steps()) throw std::invalid_argument("frame beyond the episode length");
    const auto text = render_console(trajectory.snapshot(t)) + "\n";
    if (a.out.empty()) out << text;
    else write_file(a.out, text);
    return kExitOk;
  }
  std::string svg;
  if (a.frame >= 0) {
    if (static_cast<std::size_t>(a.frame) >= trajectory.steps()) {
      throw std::invalid_argument("frame " + std::to_string(a.frame) + " beyond the episode length " +
                                  std::to_string(trajectory.steps() - 1));
    }
    svg = render_frame(trajectory.snapshot(static_cast<std::size_t>(a.frame)));
  } else {
    svg = render_animation(trajectory, a.step_duration);
  }
  if (a.out.empty()) {
    out << svg;
  } else {
    write_file(a.out, svg);
    out << "wrote " << a.out << '\n';
  }
  return kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<EpisodeRecord> records;
  for (const auto& file : a.results) {
    auto part = load_records(file);
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  nlohmann::json views = nlohmann::json::array();
  if (!a.config.empty()) views = parse_eval_config(read_file(a.config)).views;
  write_report(records, views, a.out);
  out << "report over " << records.size() << " records written to " << a.out << '\n';
  return kExitOk;
}

struct SuiteArgs {
  std::string problem = "mapf";
  std::string out;
};

int cmd_suite(const SuiteArgs& a, std::ostream& out) {
  const auto problem = a.problem == "lmapf" ? ProblemKind::Lmapf : ProblemKind::Mapf;
  const auto yaml = to_yaml(benchmark_suite_config(problem, {{"random", "random", {{"seed", 0}}},
                                                             {"a_star", "a_star", {}},
                                                             {"greedy", "greedy", {}},
                                                             {"prioritized", "prioritized", {{"window", 5}, {"horizon", 20}}}}));
  if (a.out.empty()) {
    out << yaml;
  } else {
    write_file(a.out, yaml);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent pathfinding benchmark toolkit", "mapfbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(code_version()));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a generated map in ASCII format");
  generate->add_option("--family", gen.family, "random, maze or warehouse")
      ->required()
      ->check(CLI::IsMember({"random", "maze", "warehouse"}));
  generate->add_option("--width", gen.width, "Columns (ignored for warehouse)")->check(CLI::PositiveNumber);
  generate->add_option("--height", gen.height, "Rows (ignored for warehouse)")->check(CLI::PositiveNumber);
  generate->add_option("--density", gen.density, "Obstacle probability (random)")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--loop-prob", gen.loop_prob, "Wall removal probability (maze)")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--name", gen.name, "Map name written to the header line");
  generate->add_option("--out", gen.out, "Output file (stdout when omitted)");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest", "Convert a MovingAI map, optionally sliced into tiles");
  ingest->add_option("--movingai", ing.movingai, "MovingAI .map file")->required();
  ingest->add_option("--tile", ing.tile, "Tile side length")->check(CLI::PositiveNumber);
  ingest->add_option("--name", ing.name, "Registry name (file stem when omitted)");
  ingest->add_option("--out", ing.out, "Output directory")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Evaluate every instance x algorithm of a config");
  run_cmd->add_option("--config", run.config, "Evaluation config (YAML or JSON)")->required();
  run_cmd->add_option("--workers", run.workers, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Results file (JSON Lines)")->required();
  run_cmd->add_option("--maps", run.maps, "Directory of extra .map files");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure random-policy environment speed");
  bench_cmd->add_option("--agents", bench.agents, "Number of agents")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--size", bench.size, "Map side length")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--duration", bench.duration, "Seconds to run")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--density", bench.density, "Obstacle density")->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--radius", bench.radius, "Observation radius")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--max-episode-steps", bench.max_episode_steps, "Episode limit")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Map and instance seed");

  RenderArgs ren;
  auto* render = app.add_subcommand("render", "Re-simulate a recorded episode and draw it");
  render->add_option("--results", ren.results, "Results file")->required();
  render->add_option("--instance", ren.instance, "Record index or instance key")->required();
  render->add_option("--algorithm", ren.algorithm, "Algorithm alias when an instance key is given");
  render->add_option("--out", ren.out, "Output file (stdout when omitted)");
  render->add_option("--frame", ren.frame, "Render one step instead of the animation")->check(CLI::NonNegativeNumber);
  render->add_option("--step-duration", ren.step_duration, "Seconds per step")->check(CLI::PositiveNumber);
  render->add_option("--maps", ren.maps, "Directory of extra .map files");
  render->add_flag("--console", ren.console, "Text rendering instead of SVG");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Compute the six meta-metrics from results files");
  report->add_option("--results", rep.results, "Results files")->required()->expected(1, -1);
  report->add_option("--out", rep.out, "Output directory")->required();
  report->add_option("--config", rep.config, "Config whose views section adds tables");

  SuiteArgs suite;
  auto* suite_cmd = app.add_subcommand("suite", "Print the full benchmark suite config");
  suite_cmd->add_option("--problem", suite.problem, "mapf or lmapf")->check(CLI::IsMember({"mapf", "lmapf"}));
  suite_cmd->add_option("--out", suite.out, "Output file (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << code_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*ingest) return cmd_ingest(ing, out);
    if (*run_cmd) return cmd_run(run, out, err);
    if (*bench_cmd) return cmd_bench(bench, out);
    if (*render) return cmd_render(ren, out);
    if (*report) return cmd_report(rep, out);
    if (*suite_cmd) return cmd_suite(suite, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace mapf
