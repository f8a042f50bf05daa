#include "mapf/maps_io.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "mapf/errors.hpp"
#include "mapf/mapgen.hpp"
#include "mapf/rng.hpp"

namespace mapf {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

MapGrid parse_ascii(std::string_view text) {
  auto lines = split_lines(text);
  std::string name;
  std::size_t first = 0;
  if (!lines.empty() && !lines.front().empty() && lines.front().front() == '!') {
    name = std::string(trim(lines.front().substr(1)));
    first = 1;
  }
  if (first >= lines.size()) throw ParseError("map text has no rows");
  const auto width = lines[first].size();
  if (width == 0) throw ParseError("empty map row", first + 1);
  std::vector<std::uint8_t> cells;
  cells.reserve(width * (lines.size() - first));
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (lines[i].size() != width) throw ParseError("ragged rows", i + 1);
    for (const char ch : lines[i]) {
      if (ch == '.') {
        cells.push_back(0);
      } else if (ch == '#') {
        cells.push_back(1);
      } else {
        throw ParseError(std::string("unknown map character '") + ch + "'", i + 1);
      }
    }
  }
  try {
    return MapGrid(static_cast<int>(width), static_cast<int>(lines.size() - first), std::move(cells), std::move(name),
                   MapFamily::Custom);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string to_ascii(const MapGrid& map) {
  std::string out;
  if (!map.name().empty()) out += "! " + map.name() + "\n";
  const auto cells = map.cells();
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) out += cells[map.index({r, c})] ? '#' : '.';
    out += '\n';
  }
  return out;
}

MapGrid ingest_movingai(std::string_view text, std::string name) {
  const auto lines = split_lines(text);
  int height = -1;
  int width = -1;
  bool have_type = false;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line == "map") break;
    std::istringstream in{std::string(line)};
    std::string key;
    in >> key;
    if (key == "type") {
      have_type = true;
    } else if (key == "height" || key == "width") {
      int value = -1;
      if (!(in >> value) || value < 1) throw ParseError("malformed " + key + " header", i + 1);
      (key == "height" ? height : width) = value;
    } else {
      throw ParseError("malformed MovingAI header '" + std::string(line) + "'", i + 1);
    }
  }
  if (i == lines.size()) throw ParseError("missing 'map' header line");
  if (!have_type || height < 0 || width < 0) throw ParseError("MovingAI header needs type, height and width");
  const std::size_t first = i + 1;
  if (lines.size() - first != static_cast<std::size_t>(height)) {
    throw ParseError("expected " + std::to_string(height) + " map rows, found " + std::to_string(lines.size() - first));
  }
  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (std::size_t r = first; r < lines.size(); ++r) {
    if (lines[r].size() != static_cast<std::size_t>(width)) {
      throw ParseError("row width " + std::to_string(lines[r].size()) + " does not match width " + std::to_string(width),
                       r + 1);
    }
    for (const char ch : lines[r]) cells.push_back(ch == '.' || ch == 'G' ? 0 : 1);
  }
  try {
    return MapGrid(width, height, std::move(cells), std::move(name), MapFamily::Imported);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::vector<MapGrid> slice_tiles(const MapGrid& map, int tile) {
  if (tile < 1 || map.width() % tile != 0 || map.height() % tile != 0) {
    throw std::invalid_argument("tile size " + std::to_string(tile) + " does not divide " +
                                std::to_string(map.height()) + "x" + std::to_string(map.width()));
  }
  std::vector<MapGrid> tiles;
  const int per_row = map.width() / tile;
  const int per_col = map.height() / tile;
  const int digits = per_row * per_col > 10 ? static_cast<int>(std::to_string(per_row * per_col - 1).size()) : 1;
  const auto cells = map.cells();
  for (int tr = 0; tr < per_col; ++tr) {
    for (int tc = 0; tc < per_row; ++tc) {
      std::vector<std::uint8_t> sub;
      sub.reserve(static_cast<std::size_t>(tile) * static_cast<std::size_t>(tile));
      for (int r = 0; r < tile; ++r) {
        for (int c = 0; c < tile; ++c) sub.push_back(cells[map.index({tr * tile + r, tc * tile + c})]);
      }
      auto idx = std::to_string(tr * per_row + tc);
      idx.insert(0, static_cast<std::size_t>(std::max(0, digits - static_cast<int>(idx.size()))), '0');
      // A tile that is all obstacles still needs one free cell to be a map.
      if (std::all_of(sub.begin(), sub.end(), [](std::uint8_t v) { return v != 0; })) {
        throw std::invalid_argument("tile " + idx + " of " + map.name() + " has no free cells");
      }
      tiles.emplace_back(tile, tile, std::move(sub), map.name().empty() ? idx : map.name() + "-" + idx, map.family());
    }
  }
  return tiles;
}

Placement sample_instance(const MapGrid& map, int num_agents, std::uint64_t seed) {
  if (num_agents < 1) throw std::invalid_argument("num_agents must be >= 1");
  if (static_cast<std::size_t>(num_agents) > map.free_count()) {
    throw InstanceError("agent count " + std::to_string(num_agents) + " exceeds free-cell count " +
                        std::to_string(map.free_count()));
  }
  const Components components(map);
  const auto free = map.free_cells();
  std::vector<std::uint8_t> start_used(map.size(), 0);
  std::vector<std::uint8_t> goal_used(map.size(), 0);
  CounterRng rng(seed, Stream::InstanceSampling);
  Placement out;
  out.starts.reserve(static_cast<std::size_t>(num_agents));
  out.goals.reserve(static_cast<std::size_t>(num_agents));
  for (int agent = 0; agent < num_agents; ++agent) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const Cell s = free[rng.below(free.size())];
      const Cell g = free[rng.below(free.size())];
      const auto si = map.index(s);
      const auto gi = map.index(g);
      if (start_used[si] || goal_used[gi] || si == gi || components.label(si) != components.label(gi)) continue;
      start_used[si] = 1;
      goal_used[gi] = 1;
      out.starts.push_back(s);
      out.goals.push_back(g);
      placed = true;
    }
    if (!placed) {
      throw InstanceError("could not place agent " + std::to_string(agent) + " on map '" + map.name() + "' after " +
                          std::to_string(kPlacementAttempts) + " attempts");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void MapRegistry::add(std::string name, MapGrid map) {
  auto stored = std::make_shared<const MapGrid>(map.renamed(name, map.family()));
  std::unique_lock lock(mutex_);
  maps_[std::move(name)] = std::move(stored);
}

std::shared_ptr<const MapGrid> MapRegistry::find(const std::string& name) const {
  std::shared_lock lock(mutex_);
  const auto it = maps_.find(name);
  return it == maps_.end() ? nullptr : it->second;
}

std::shared_ptr<const MapGrid> MapRegistry::resolve(const std::string& name) const {
  auto map = find(name);
  if (!map) throw InstanceError("unknown map name '" + name + "'");
  return map;
}

bool MapRegistry::contains(const std::string& name) const { return find(name) != nullptr; }

std::vector<std::string> MapRegistry::names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  out.reserve(maps_.size());
  for (const auto& [name, _] : maps_) out.push_back(name);
  return out;
}

std::size_t MapRegistry::size() const {
  std::shared_lock lock(mutex_);
  return maps_.size();
}

std::size_t load_map_directory(MapRegistry& registry, const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InstanceError("map directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".map") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    MapGrid map = [&] {
      try {
        return parse_ascii(buffer.str());
      } catch (const ParseError& e) {
        throw ParseError(file.string() + ": " + e.what());
      }
    }();
    std::string name = map.name().empty() ? file.stem().string() : map.name();
    registry.add(std::move(name), std::move(map));
  }
  return files.size();
}

std::string benchmark_map_name(std::string_view family, int index) {
  auto idx = std::to_string(index);
  const std::size_t width = family == "puzzle" ? 2 : 3;
  if (idx.size() < width) idx.insert(0, width - idx.size(), '0');
  return std::string(family) + "-" + idx;
}

std::vector<std::string> puzzle_maps_ascii() {
  return {
      "#####\n#####\n.....\n##.##\n#####\n",  // corridor with one side pocket
      "..#..\n..#..\n.....\n..#..\n..#..\n",  // two rooms, one door
      ".....\n.###.\n.###.\n.###.\n.....\n",  // ring
      ".....\n##.##\n##.##\n##.##\n##.##\n",  // T junction
      "##.##\n##.##\n.....\n##.##\n##.##\n",  // cross
      "...##\n#.###\n#...#\n###.#\n##...\n",  // zigzag
      ".....\n.....\n##.##\n.....\n.....\n",  // bottleneck
      ".#.#.\n.#.#.\n.....\n.#.#.\n.#.#.\n",  // dead ends
      ".####\n.#..#\n.#.##\n.....\n####.\n",  // hooked corridor
      ".....\n#.#.#\n#.#.#\n#.#.#\n#####\n",  // comb
      ".....\n####.\n...#.\n.#...\n.####\n",  // spiral
      ".....\n.###.\n.....\n.###.\n.....\n",  // parallel corridors
      "..#..\n..#..\n..#..\n.....\n..#..\n",  // narrow gate
      ".....\n.#.#.\n.....\n.#.#.\n.....\n",  // pillars
      "..###\n...##\n#...#\n##...\n###..\n",  // staircase
      "..#..\n..#..\n.....\n#.#.#\n.....\n",  // double bottleneck
  };
}

void register_benchmark_maps(MapRegistry& registry) {
  for (int i = 0; i < kBenchmarkMapsPerFamily; ++i) {
    CounterRng params(static_cast<std::uint64_t>(i), Stream::MapGeneration, 0x52414e44);
    const int side = 17 + static_cast<int>(params.below(5));
    const double density = 0.1 + 0.2 * params.unit();
    registry.add(benchmark_map_name("random", i),
                 gen_random(side, side, density, static_cast<std::uint64_t>(i)).renamed({}, MapFamily::Random));
  }
  for (int i = 0; i < kBenchmarkMapsPerFamily; ++i) {
    CounterRng params(static_cast<std::uint64_t>(i), Stream::MapGeneration, 0x4d415a45);
    const int side = 17 + static_cast<int>(params.below(5));
    registry.add(benchmark_map_name("mazes", i), gen_maze(side, side, static_cast<std::uint64_t>(i), 0.1));
  }
  registry.add("warehouse", gen_warehouse());
  const auto puzzles = puzzle_maps_ascii();
  for (std::size_t i = 0; i < puzzles.size(); ++i) {
    registry.add(benchmark_map_name("puzzle", static_cast<int>(i)), parse_ascii(puzzles[i]));
  }
}

// ---------------------------------------------------------------------------

std::string_view to_string(DatasetTag tag) noexcept {
  switch (tag) {
    case DatasetTag::Random: return "random";
    case DatasetTag::Mazes: return "mazes";
    case DatasetTag::Warehouse: return "warehouse";
    case DatasetTag::Puzzles: return "puzzles";
    case DatasetTag::Cities: return "cities";
    case DatasetTag::CitiesTiles: return "cities_tiles";
    case DatasetTag::Custom: return "custom";
  }
  return "custom";
}

DatasetTag dataset_tag_from_string(std::string_view text) {
  for (auto tag : {DatasetTag::Random, DatasetTag::Mazes, DatasetTag::Warehouse, DatasetTag::Puzzles,
                   DatasetTag::Cities, DatasetTag::CitiesTiles, DatasetTag::Custom}) {
    if (to_string(tag) == text) return tag;
  }
  throw std::invalid_argument("unknown dataset tag '" + std::string(text) + "'");
}

std::string InstanceSpec::key() const {
  std::string out;
  out += to_string(dataset_tag);
  out += '/';
  out += map_name;
  out += "/agents=" + std::to_string(num_agents);
  out += "/seed=" + std::to_string(seed);
  out += "/steps=" + std::to_string(max_episode_steps);
  out += '/';
  out += to_string(on_target);
  out += '/';
  out += to_string(collision_system);
  out += "/r=" + std::to_string(obs_radius);
  return out;
}

std::size_t EnvironmentBlock::combinations() const noexcept {
  return map_names.size() * num_agents.size() * seeds.size() * max_episode_steps.size() * obs_radius.size() *
         collision_systems.size() * on_targets.size();
}

void EvalConfig::validate() const {
  if (environment.empty()) throw std::invalid_argument("config has no environment block");
  for (const auto& b : environment) {
    if (b.map_names.empty() || b.num_agents.empty() || b.seeds.empty() || b.max_episode_steps.empty() ||
        b.obs_radius.empty() || b.collision_systems.empty() || b.on_targets.empty()) {
      throw std::invalid_argument("grid_search lists must be non-empty");
    }
  }
  std::vector<std::string> aliases;
  for (const auto& a : algorithms) {
    if (a.alias.empty()) throw std::invalid_argument("algorithm alias must be non-empty");
    if (std::find(aliases.begin(), aliases.end(), a.alias) != aliases.end()) {
      throw std::invalid_argument("duplicate algorithm alias '" + a.alias + "'");
    }
    aliases.push_back(a.alias);
  }
}

namespace {

nlohmann::json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      auto out = nlohmann::json::array();
      for (const auto& item : node) out.push_back(yaml_to_json(item));
      return out;
    }
    case YAML::NodeType::Map: {
      auto out = nlohmann::json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return out;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const auto& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted scalar
  if (text == "true" || text == "True") return true;
  if (text == "false" || text == "False") return false;
  if (text == "null" || text == "~") return nullptr;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return text;
}

// Accepts either a scalar or {grid_search: [...]}.
template <typename T, typename Convert>
std::vector<T> grid_values(const nlohmann::json& block, const char* key, std::vector<T> fallback, Convert convert) {
  if (!block.contains(key)) return fallback;
  const auto& v = block.at(key);
  std::vector<T> out;
  if (v.is_object()) {
    if (!v.contains("grid_search") || !v.at("grid_search").is_array()) {
      throw ParseError(std::string("environment.") + key + ": expected a scalar or {grid_search: [...]}");
    }
    for (const auto& item : v.at("grid_search")) out.push_back(convert(item));
  } else {
    out.push_back(convert(v));
  }
  return out;
}

EnvironmentBlock parse_block(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("environment block must be a mapping");
  EnvironmentBlock b;
  auto as_int = [](const nlohmann::json& v) {
    if (!v.is_number_integer()) throw ParseError("expected an integer, got " + v.dump());
    return v.get<int>();
  };
  auto as_string = [](const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  if (j.contains("dataset")) b.dataset = dataset_tag_from_string(as_string(j.at("dataset")));
  b.map_names = grid_values<std::string>(j, "map_name", {}, as_string);
  if (b.map_names.empty()) throw ParseError("environment block needs map_name");
  b.num_agents = grid_values<int>(j, "num_agents", b.num_agents, as_int);
  b.seeds = grid_values<std::uint64_t>(j, "seed", b.seeds, [](const nlohmann::json& v) {
    if (!v.is_number_integer()) throw ParseError("seed must be an integer");
    return v.get<std::uint64_t>();
  });
  b.max_episode_steps = grid_values<int>(j, "max_episode_steps", b.max_episode_steps, as_int);
  b.obs_radius = grid_values<int>(j, "obs_radius", b.obs_radius, as_int);
  b.collision_systems = grid_values<CollisionSystem>(
      j, "collision_system", b.collision_systems,
      [&](const nlohmann::json& v) { return collision_system_from_string(as_string(v)); });
  b.on_targets = grid_values<OnTarget>(j, "on_target", b.on_targets,
                                       [&](const nlohmann::json& v) { return on_target_from_string(as_string(v)); });
  return b;
}

}  // namespace

EvalConfig parse_eval_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(e.msg, e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0);
  }
  const auto j = yaml_to_json(root);
  if (!j.is_object()) throw ParseError("config must be a mapping with environment/algorithms/views");
  for (const auto& [key, _] : j.items()) {
    if (key != "environment" && key != "algorithms" && key != "views" && key != "results_views") {
      throw ParseError("unknown top-level config key '" + key + "'");
    }
  }
  EvalConfig config;
  config.source = std::string(text);
  try {
    if (!j.contains("environment")) throw ParseError("config needs an environment section");
    const auto& env = j.at("environment");
    if (env.is_array()) {
      for (const auto& block : env) config.environment.push_back(parse_block(block));
    } else {
      config.environment.push_back(parse_block(env));
    }
    if (j.contains("algorithms")) {
      const auto& algos = j.at("algorithms");
      auto parse_algo = [](std::string alias, const nlohmann::json& body) {
        if (!body.is_object()) throw ParseError("algorithm '" + alias + "' must be a mapping");
        AlgorithmSpec spec;
        spec.alias = std::move(alias);
        spec.name = body.value("name", spec.alias);
        for (const auto& [k, v] : body.items()) {
          if (k == "params") {
            if (!v.is_object()) throw ParseError("params of '" + spec.alias + "' must be a mapping");
            spec.params.update(v);
          } else if (k != "name" && k != "alias") {
            spec.params[k] = v;
          }
        }
        return spec;
      };
      if (algos.is_object()) {
        // Listing order matters for record order; JSON objects sort their keys.
        const auto node = root["algorithms"];
        if (node.IsMap()) {
          for (const auto& kv : node) {
            const auto alias = kv.first.as<std::string>();
            config.algorithms.push_back(parse_algo(alias, algos.at(alias)));
          }
        } else {
          for (const auto& [alias, body] : algos.items()) config.algorithms.push_back(parse_algo(alias, body));
        }
      } else if (algos.is_array()) {
        for (const auto& body : algos) {
          if (!body.is_object() || !body.contains("alias")) throw ParseError("algorithm list entries need an alias");
          config.algorithms.push_back(parse_algo(body.at("alias").get<std::string>(), body));
        }
      } else if (!algos.is_null()) {
        throw ParseError("algorithms must be a mapping or a list");
      }
    }
    if (j.contains("views")) config.views = j.at("views");
    if (j.contains("results_views")) config.views = j.at("results_views");
    config.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return config;
}

EvalConfig load_eval_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_eval_config(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

namespace {

template <typename T, typename F>
void emit_grid(YAML::Emitter& out, const char* key, const std::vector<T>& values, F&& convert) {
  out << YAML::Key << key << YAML::Value;
  if (values.size() == 1) {
    out << convert(values.front());
    return;
  }
  out << YAML::BeginMap << YAML::Key << "grid_search" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& v : values) out << convert(v);
  out << YAML::EndSeq << YAML::EndMap;
}

void emit_json(YAML::Emitter& out, const nlohmann::json& j) {
  if (j.is_object()) {
    out << YAML::BeginMap;
    for (const auto& [k, v] : j.items()) {
      out << YAML::Key << k << YAML::Value;
      emit_json(out, v);
    }
    out << YAML::EndMap;
  } else if (j.is_array()) {
    out << YAML::BeginSeq;
    for (const auto& v : j) emit_json(out, v);
    out << YAML::EndSeq;
  } else if (j.is_string()) {
    out << YAML::DoubleQuoted << j.get<std::string>();
  } else if (j.is_null()) {
    out << YAML::Null;
  } else {
    out << j.dump();
  }
}

}  // namespace

std::string to_yaml(const EvalConfig& config) {
  YAML::Emitter out;
  auto ident = [](const auto& v) { return v; };
  auto str = [](auto v) { return std::string(to_string(v)); };
  out << YAML::BeginMap << YAML::Key << "environment" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : config.environment) {
    out << YAML::BeginMap;
    out << YAML::Key << "dataset" << YAML::Value << std::string(to_string(b.dataset));
    emit_grid(out, "on_target", b.on_targets, str);
    emit_grid(out, "collision_system", b.collision_systems, str);
    emit_grid(out, "max_episode_steps", b.max_episode_steps, ident);
    emit_grid(out, "obs_radius", b.obs_radius, ident);
    emit_grid(out, "seed", b.seeds, ident);
    emit_grid(out, "num_agents", b.num_agents, ident);
    emit_grid(out, "map_name", b.map_names, ident);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "algorithms" << YAML::Value << YAML::BeginMap;
  for (const auto& a : config.algorithms) {
    out << YAML::Key << a.alias << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << a.name;
    for (const auto& [k, v] : a.params.items()) {
      out << YAML::Key << k << YAML::Value;
      emit_json(out, v);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "views" << YAML::Value;
  emit_json(out, config.views.is_null() ? nlohmann::json::array() : config.views);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<InstanceSpec> expand_config(const EvalConfig& config, const MapRegistry& registry) {
  config.validate();
  std::vector<InstanceSpec> specs;
  for (const auto& b : config.environment) {
    for (const auto& map_name : b.map_names) {
      const auto map = registry.resolve(map_name);
      for (const int agents : b.num_agents) {
        if (agents < 1 || static_cast<std::size_t>(agents) > map->free_count()) {
          throw InstanceError("map '" + map_name + "' cannot host " + std::to_string(agents) + " agents");
        }
        for (const auto on_target : b.on_targets) {
          for (const auto collision : b.collision_systems) {
            for (const int radius : b.obs_radius) {
              for (const int steps : b.max_episode_steps) {
                for (const auto seed : b.seeds) {
                  InstanceSpec s;
                  s.map_name = map_name;
                  s.seed = seed;
                  s.num_agents = agents;
                  s.max_episode_steps = steps;
                  s.on_target = on_target;
                  s.problem = on_target == OnTarget::Restart ? ProblemKind::Lmapf : ProblemKind::Mapf;
                  s.dataset_tag = b.dataset;
                  s.collision_system = collision;
                  s.obs_radius = radius;
                  specs.push_back(std::move(s));
                }
              }
            }
          }
        }
      }
    }
  }
  return specs;
}

EvalConfig benchmark_suite_config(ProblemKind problem, std::vector<AlgorithmSpec> algorithms) {
  const bool lifelong = problem == ProblemKind::Lmapf;
  const OnTarget on_target = lifelong ? OnTarget::Restart : OnTarget::Nothing;
  const int steps = lifelong ? 256 : 128;
  auto seeds = [](int n) {
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint64_t>(i));
    return out;
  };
  auto names = [](std::string_view family, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(benchmark_map_name(family, i));
    return out;
  };
  auto block = [&](DatasetTag tag, std::vector<std::string> maps, std::vector<int> agents, int n_seeds,
                   int max_steps, OnTarget target) {
    EnvironmentBlock b;
    b.dataset = tag;
    b.map_names = std::move(maps);
    b.num_agents = std::move(agents);
    b.seeds = seeds(n_seeds);
    b.max_episode_steps = {max_steps};
    b.on_targets = {target};
    return b;
  };
  std::vector<std::string> city_tiles;
  for (int city = 0; city < 8; ++city) {
    for (int t = 0; t < 16; ++t) {
      auto tile = std::to_string(t);
      if (tile.size() < 2) tile.insert(0, "0");
      city_tiles.push_back("city-0" + std::to_string(city) + "-" + tile);
    }
  }
  std::vector<std::string> cities;
  for (int city = 0; city < 8; ++city) cities.push_back("city-0" + std::to_string(city));

  EvalConfig config;
  config.environment = {
      block(DatasetTag::Random, names("random", 128), {8, 16, 24, 32, 48, 64}, 1, steps, on_target),
      block(DatasetTag::Mazes, names("mazes", 128), {8, 16, 24, 32, 48, 64}, 1, steps, on_target),
      block(DatasetTag::Warehouse, {"warehouse"}, {32, 64, 96, 128, 160, 192}, 128, steps, on_target),
      block(DatasetTag::Puzzles, names("puzzle", 16), {2, 3, 4}, 10, steps, on_target),
      block(DatasetTag::Cities, cities, {1}, 10, 2048, OnTarget::Nothing),
      block(DatasetTag::CitiesTiles, city_tiles, {64, 128, 192, 256}, 1, 256, on_target),
  };
  config.algorithms = std::move(algorithms);
  config.source = to_yaml(config);
  return config;
}

}  // namespace mapf
