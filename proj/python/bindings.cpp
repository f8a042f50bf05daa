#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "mapf/core.hpp"
#include "mapf/errors.hpp"
#include "mapf/harness.hpp"
#include "mapf/mapgen.hpp"
#include "mapf/maps_io.hpp"
#include "mapf/metrics.hpp"
#include "mapf/obs.hpp"
#include "mapf/viz.hpp"

namespace py = pybind11;
using namespace mapf;

namespace {

using Planes = py::array_t<std::uint8_t, py::array::c_style>;
using ActionArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

MapRegistry& registry() {
  static MapRegistry* reg = [] {
    auto* r = new MapRegistry;
    register_benchmark_maps(*r);
    return r;
  }();
  return *reg;
}

GridConfig make_config(std::optional<int> size, int width, int height, double density, int num_agents, int obs_radius,
                       int max_episode_steps, const std::string& on_target, const std::string& collision_system,
                       std::uint64_t seed, const std::optional<std::string>& map,
                       const std::optional<std::string>& map_name, bool shared_reward) {
  GridConfig c;
  c.width = size.value_or(width);
  c.height = size.value_or(height);
  c.density = density;
  c.num_agents = num_agents;
  c.obs_radius = obs_radius;
  c.max_episode_steps = max_episode_steps;
  c.on_target = on_target_from_string(on_target);
  c.collision_system = collision_system_from_string(collision_system);
  c.seed = seed;
  c.shared_reward = shared_reward;
  if (map && map_name) throw std::invalid_argument("give either map or map_name, not both");
  if (map) c.map = std::make_shared<const MapGrid>(parse_ascii(*map));
  if (map_name) c.map = registry().resolve(*map_name);
  if (c.map) {
    c.width = c.map->width();
    c.height = c.map->height();
  }
  c.validate();
  return c;
}

py::dict tally_dict(const CollisionTally& t) {
  py::dict d;
  d["obstacle"] = t.obstacle;
  d["vertex"] = t.vertex;
  d["edge"] = t.edge;
  return d;
}

std::vector<Action> to_actions(const std::int64_t* data, std::size_t count) {
  std::vector<Action> out(count);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (data[i] < 0 || data[i] >= kActionCount) {
      throw std::invalid_argument("action " + std::to_string(data[i]) + " of agent " + std::to_string(i) +
                                  " is outside [0, " + std::to_string(kActionCount) + ")");
    }
    out[i] = static_cast<Action>(data[i]);
  }
  return out;
}

// Planes for every agent, zeros for inactive ones.
void write_planes(const Env& env, const ObservationBuilder& builder, std::uint8_t* out) {
  const std::size_t stride = 3 * builder.plane_size();
  for (int i = 0; i < env.num_agents(); ++i) {
    std::span<std::uint8_t> dst(out + static_cast<std::size_t>(i) * stride, stride);
    if (env.is_active(i)) {
      builder.write(env, i, dst);
    } else {
      std::fill(dst.begin(), dst.end(), std::uint8_t{0});
    }
  }
}

class BoundEnv {
 public:
  explicit BoundEnv(GridConfig config) : config_(std::move(config)) { config_.validate(); }

  Planes reset(std::optional<std::uint64_t> seed) {
    if (seed) config_.seed = *seed;
    env_.emplace(config_);
    builder_.emplace(env_->grid(), config_.obs_radius);
    return observations();
  }

  py::tuple step(const ActionArray& actions) {
    Env& e = env();
    if (actions.ndim() != 1) throw std::invalid_argument("actions must be a flat sequence");
    const auto outcome = e.step(to_actions(actions.data(), static_cast<std::size_t>(actions.size())));
    py::array_t<double> rewards(static_cast<py::ssize_t>(outcome.rewards.size()), outcome.rewards.data());
    py::dict info;
    info["step"] = e.step_count();
    info["goals_reached"] = outcome.goals_reached;
    info["goals_achieved"] = e.goals_achieved();
    info["step_collisions"] = tally_dict(outcome.collisions);
    info["collisions"] = tally_dict(e.collisions());
    return py::make_tuple(observations(), rewards, outcome.terminated, outcome.truncated, info);
  }

  Planes observations() const {
    const Env& e = env();
    const auto side = static_cast<py::ssize_t>(builder_->side());
    Planes out({static_cast<py::ssize_t>(e.num_agents()), py::ssize_t{3}, side, side});
    write_planes(e, *builder_, out.mutable_data());
    return out;
  }

  const GridConfig& config() const noexcept { return config_; }
  const Env& env() const {
    if (!env_) throw std::logic_error("call reset() before using the environment");
    return *env_;
  }
  Env& env() {
    if (!env_) throw std::logic_error("call reset() before using the environment");
    return *env_;
  }

 private:
  GridConfig config_;
  std::optional<Env> env_;
  std::optional<ObservationBuilder> builder_;
};

py::array_t<std::int32_t> cells_array(std::span<const Cell> cells) {
  py::array_t<std::int32_t> out({static_cast<py::ssize_t>(cells.size()), py::ssize_t{2}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    v(static_cast<py::ssize_t>(i), 0) = cells[i].row;
    v(static_cast<py::ssize_t>(i), 1) = cells[i].col;
  }
  return out;
}

// Runs an action script on the core types directly, for parity checks.
py::tuple reference_episode(const GridConfig& config, std::uint64_t seed, const ActionArray& script) {
  if (script.ndim() != 2) throw std::invalid_argument("script must have shape (steps, num_agents)");
  GridConfig cfg = config;
  cfg.seed = seed;
  Env env(cfg);
  const ObservationBuilder builder(env.grid(), cfg.obs_radius);
  const auto steps = static_cast<std::size_t>(script.shape(0));
  const auto n = static_cast<std::size_t>(env.num_agents());
  if (static_cast<std::size_t>(script.shape(1)) != n) throw std::invalid_argument("script width must equal num_agents");
  const auto side = static_cast<py::ssize_t>(builder.side());
  const auto per_step = n * 3 * builder.plane_size();

  std::vector<std::uint8_t> obs(per_step);
  write_planes(env, builder, obs.data());
  std::vector<double> rewards;
  std::vector<std::uint8_t> terminated, truncated;
  std::size_t done = 0;
  for (; done < steps && !env.done(); ++done) {
    const auto outcome = env.step(to_actions(script.data() + done * n, n));
    obs.resize(obs.size() + per_step);
    write_planes(env, builder, obs.data() + (done + 1) * per_step);
    rewards.insert(rewards.end(), outcome.rewards.begin(), outcome.rewards.end());
    terminated.push_back(outcome.terminated);
    truncated.push_back(outcome.truncated);
  }
  Planes obs_out({static_cast<py::ssize_t>(done + 1), static_cast<py::ssize_t>(n), py::ssize_t{3}, side, side});
  std::copy(obs.begin(), obs.end(), obs_out.mutable_data());
  py::array_t<double> rew_out({static_cast<py::ssize_t>(done), static_cast<py::ssize_t>(n)});
  std::copy(rewards.begin(), rewards.end(), rew_out.mutable_data());
  py::array_t<bool> term_out(static_cast<py::ssize_t>(done));
  py::array_t<bool> trunc_out(static_cast<py::ssize_t>(done));
  for (std::size_t t = 0; t < done; ++t) {
    term_out.mutable_data()[t] = terminated[t] != 0;
    trunc_out.mutable_data()[t] = truncated[t] != 0;
  }
  return py::make_tuple(obs_out, rew_out, term_out, trunc_out);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the mapfbench package.";
  m.attr("__version__") = std::string(code_version());
  m.attr("ACTION_COUNT") = kActionCount;

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<GridConfig>(m, "GridConfig")
      .def(py::init(&make_config), py::kw_only(), py::arg("size") = py::none(), py::arg("width") = 8,
           py::arg("height") = 8, py::arg("density") = 0.3, py::arg("num_agents") = 1, py::arg("obs_radius") = 5,
           py::arg("max_episode_steps") = 64, py::arg("on_target") = "nothing",
           py::arg("collision_system") = "soft", py::arg("seed") = 0, py::arg("map") = py::none(),
           py::arg("map_name") = py::none(), py::arg("shared_reward") = false)
      .def_readonly("width", &GridConfig::width)
      .def_readonly("height", &GridConfig::height)
      .def_readonly("density", &GridConfig::density)
      .def_readonly("num_agents", &GridConfig::num_agents)
      .def_readonly("obs_radius", &GridConfig::obs_radius)
      .def_readonly("max_episode_steps", &GridConfig::max_episode_steps)
      .def_readonly("seed", &GridConfig::seed)
      .def_readonly("shared_reward", &GridConfig::shared_reward)
      .def_property_readonly("on_target", [](const GridConfig& c) { return std::string(to_string(c.on_target)); })
      .def_property_readonly("collision_system",
                             [](const GridConfig& c) { return std::string(to_string(c.collision_system)); })
      .def_property_readonly("map", [](const GridConfig& c) -> std::optional<std::string> {
        return c.map ? std::optional(to_ascii(*c.map)) : std::nullopt;
      })
      .def("__repr__", [](const GridConfig& c) {
        std::ostringstream s;
        s << "GridConfig(width=" << c.width << ", height=" << c.height << ", num_agents=" << c.num_agents
          << ", obs_radius=" << c.obs_radius << ", max_episode_steps=" << c.max_episode_steps
          << ", on_target='" << to_string(c.on_target) << "', collision_system='"
          << to_string(c.collision_system) << "', seed=" << c.seed << ")";
        return s.str();
      });

  py::class_<BoundEnv>(m, "Env")
      .def(py::init<GridConfig>(), py::arg("config"))
      .def("reset", &BoundEnv::reset, py::arg("seed") = py::none())
      .def("step", &BoundEnv::step, py::arg("actions"))
      .def("observations", &BoundEnv::observations)
      .def_property_readonly("config", &BoundEnv::config)
      .def_property_readonly("num_agents", [](const BoundEnv& b) { return b.config().num_agents; })
      .def_property_readonly("step_count", [](const BoundEnv& b) { return b.env().step_count(); })
      .def_property_readonly("positions", [](const BoundEnv& b) { return cells_array(b.env().positions()); })
      .def_property_readonly("goals", [](const BoundEnv& b) { return cells_array(b.env().goals()); })
      .def_property_readonly("active",
                             [](const BoundEnv& b) {
                               const auto a = b.env().active();
                               return py::array_t<bool>(static_cast<py::ssize_t>(a.size()),
                                                        reinterpret_cast<const bool*>(a.data()));
                             })
      .def_property_readonly("terminated", [](const BoundEnv& b) { return b.env().terminated(); })
      .def_property_readonly("truncated", [](const BoundEnv& b) { return b.env().truncated(); })
      .def_property_readonly("grid", [](const BoundEnv& b) { return to_ascii(b.env().grid()); })
      .def("indicators",
           [](const BoundEnv& b) {
             const auto ind = episode_indicators(b.env());
             py::dict d;
             d["SoC"] = ind.soc;
             d["makespan"] = ind.makespan;
             d["csr"] = ind.csr;
             d["goals_achieved"] = ind.goals_achieved;
             d["throughput"] = ind.throughput;
             d["collisions"] = tally_dict(ind.collisions);
             d["episode_length"] = ind.episode_length;
             return d;
           })
      .def(
          "render_svg",
          [](const BoundEnv& b, std::optional<int> ego_agent) {
            SvgStyle style;
            style.ego_agent = ego_agent;
            style.ego_radius = b.config().obs_radius;
            return render_frame(export_global_state(b.env()), style);
          },
          py::arg("ego_agent") = py::none())
      .def("render_console", [](const BoundEnv& b) { return render_console(export_global_state(b.env())); });

  m.def("register_map", [](const std::string& name, const std::string& ascii) { registry().add(name, parse_ascii(ascii)); },
        py::arg("name"), py::arg("ascii"));
  m.def("map_names", [] { return registry().names(); });
  m.def("get_map", [](const std::string& name) { return to_ascii(*registry().resolve(name)); }, py::arg("name"));
  m.def("generate_random", [](int w, int h, double density, std::uint64_t seed) {
    return to_ascii(gen_random(w, h, density, seed));
  }, py::arg("width"), py::arg("height"), py::arg("density"), py::arg("seed"));
  m.def("generate_maze", [](int w, int h, std::uint64_t seed, double loop_prob) {
    return to_ascii(gen_maze(w, h, seed, loop_prob));
  }, py::arg("width"), py::arg("height"), py::arg("seed"), py::arg("loop_prob") = 0.1);
  m.def("generate_warehouse", [] { return to_ascii(gen_warehouse()); });

  m.def("reference_episode", &reference_episode, py::arg("config"), py::arg("seed"), py::arg("script"));

  m.def(
      "run_config",
      [](const std::string& config_text, int workers) {
        const auto cfg = parse_eval_config(config_text);
        SuiteResult res;
        {
          py::gil_scoped_release release;
          res = run_suite(cfg, registry(), workers);
        }
        std::ostringstream out;
        write_records(out, res.records);
        return py::make_tuple(out.str(), res.manifest.to_json().dump());
      },
      py::arg("config_text"), py::arg("workers") = 1);
  m.def(
      "compute_report",
      [](const std::string& jsonl) {
        std::istringstream in(jsonl);
        const auto records = read_records(in);
        return to_json(compute_report(records)).dump();
      },
      py::arg("jsonl"));
  m.def(
      "bench",
      [](int size, int agents, double duration, double density, int radius, std::uint64_t seed) {
        GridConfig cfg;
        cfg.width = size;
        cfg.height = size;
        cfg.num_agents = agents;
        cfg.density = density;
        cfg.obs_radius = radius;
        cfg.seed = seed;
        cfg.max_episode_steps = 256;
        BenchResult r;
        {
          py::gil_scoped_release release;
          r = bench_speed(cfg, duration);
        }
        py::dict d;
        d["sps"] = r.sps;
        d["ops"] = r.ops;
        d["steps"] = r.steps;
        d["episodes"] = r.episodes;
        return d;
      },
      py::arg("size") = 32, py::arg("agents") = 64, py::arg("duration") = 1.0, py::arg("density") = 0.3,
      py::arg("radius") = 5, py::arg("seed") = 0);
}
