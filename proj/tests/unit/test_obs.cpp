#include <doctest.h>

#include "mapf/obs.hpp"
#include "oracles.hpp"

using namespace mapf;

namespace {

Env make_env(const std::vector<std::string>& rows, Scenario s, int radius, OnTarget on_target = OnTarget::Nothing) {
  GridConfig cfg;
  cfg.map = std::make_shared<const MapGrid>(oracle::parse(rows));
  cfg.num_agents = static_cast<int>(s.starts.size());
  cfg.obs_radius = radius;
  cfg.on_target = on_target;
  return Env(cfg, std::move(s));
}

}  // namespace

TEST_CASE("projection clamps each component") {
  CHECK(project_offset({9, -2}, 5) == Cell{5, -2});
  CHECK(project_offset({-7, 8}, 5) == Cell{-5, 5});
  CHECK(project_offset({1, 1}, 5) == Cell{1, 1});
  const Cell once = project_offset({12, -30}, 3);
  CHECK(project_offset(once, 3) == once);
}

TEST_CASE("radius 5 gives 11x11 planes with the agent at the centre") {
  std::vector<std::string> rows(20, std::string(20, '.'));
  const auto env = make_env(rows, Scenario{{{10, 10}}, {{19, 8}}}, 5);
  const auto obs = extract_observation(env, 0);
  CHECK(obs.side() == 11);
  CHECK(obs.obstacles.size() == 121);
  CHECK(obs.at(obs.agents, 0, 0) == 1);
  CHECK(obs.at(obs.obstacles, 0, 0) == 0);
  // Goal at relative (9, -2) projects to (5, -2).
  CHECK(obs.at(obs.target, 5, -2) == 1);
  int ones = 0;
  for (auto v : obs.target) ones += v;
  CHECK(ones == 1);
  CHECK(obs.self_position == Cell{10, 10});
  CHECK(obs.self_goal == Cell{19, 8});

  const auto no_self = extract_observation(env, 0, {.include_self = false});
  CHECK(no_self.at(no_self.agents, 0, 0) == 0);
}

TEST_CASE("corner agent sees padding as obstacles") {
  const auto env = make_env({"...", "...", "..."}, Scenario{{{0, 0}}, {{2, 2}}}, 2);
  const auto obs = extract_observation(env, 0);
  for (int dr = -2; dr <= 2; ++dr) {
    for (int dc = -2; dc <= 2; ++dc) {
      const bool outside = dr < 0 || dc < 0;
      CHECK(obs.at(obs.obstacles, dr, dc) == (outside ? 1 : 0));
    }
  }
  CHECK(obs.at(obs.target, 2, 2) == 1);
}

TEST_CASE("crop matches the raster and the agent set") {
  const std::vector<std::string> rows = {
      "..#.....", ".#...#..", "....#...", "#.......", "...##...", "........",
  };
  const auto env = make_env(rows, Scenario{{{2, 2}, {0, 0}, {5, 7}, {3, 4}}, {{5, 0}, {1, 2}, {0, 7}, {2, 6}}}, 3);
  const auto& g = env.grid();
  for (int agent = 0; agent < 4; ++agent) {
    const auto obs = extract_observation(env, agent);
    const Cell me = env.positions()[static_cast<std::size_t>(agent)];
    for (int dr = -3; dr <= 3; ++dr) {
      for (int dc = -3; dc <= 3; ++dc) {
        const Cell c{me.row + dr, me.col + dc};
        if (!g.in_bounds(c)) {
          CHECK(obs.at(obs.obstacles, dr, dc) == 1);
          CHECK(obs.at(obs.agents, dr, dc) == 0);
          continue;
        }
        CHECK(obs.at(obs.obstacles, dr, dc) == (g.blocked(c) ? 1 : 0));
        CHECK(obs.at(obs.agents, dr, dc) == (env.occupant(c) >= 0 ? 1 : 0));
      }
    }
  }
}

TEST_CASE("builder writes the same planes as extract_observation") {
  GridConfig cfg;
  cfg.width = 16;
  cfg.height = 12;
  cfg.num_agents = 10;
  cfg.obs_radius = 4;
  cfg.seed = 3;
  const Env env(cfg);
  const ObservationBuilder builder(env.grid(), 4);
  std::vector<std::uint8_t> buf(3 * builder.plane_size());
  for (int i = 0; i < 10; ++i) {
    builder.write(env, i, buf);
    const auto obs = extract_observation(env, i);
    const auto p = builder.plane_size();
    CHECK(std::equal(obs.obstacles.begin(), obs.obstacles.end(), buf.begin()));
    CHECK(std::equal(obs.agents.begin(), obs.agents.end(), buf.begin() + static_cast<std::ptrdiff_t>(p)));
    CHECK(std::equal(obs.target.begin(), obs.target.end(), buf.begin() + static_cast<std::ptrdiff_t>(2 * p)));
  }
}

TEST_CASE("bad indices and inactive agents are rejected") {
  auto env = make_env({"...."}, Scenario{{{0, 0}, {0, 3}}, {{0, 1}, {0, 2}}}, 1, OnTarget::Disappear);
  CHECK_THROWS_AS(extract_observation(env, 2), std::out_of_range);
  env.step(std::vector<Action>{Action::Right, Action::Wait});
  CHECK_THROWS_AS(extract_observation(env, 0), std::invalid_argument);
  const auto s = export_global_state(env);
  CHECK(s.active == std::vector<std::uint8_t>{0, 1});
  CHECK(s.step == 1);
}

TEST_CASE("global state export is a decoupled snapshot") {
  GridConfig cfg;
  cfg.num_agents = 3;
  cfg.seed = 4;
  Env env(cfg);
  const auto a = export_global_state(env);
  const auto b = export_global_state(env);
  CHECK(a == b);
  CHECK(std::equal(a.positions.begin(), a.positions.end(), env.positions().begin()));
  env.step(std::vector<Action>{Action::Up, Action::Down, Action::Left});
  CHECK(a == b);
  CHECK(a.width == env.grid().width());
  CHECK(a.obstacles.size() == env.grid().size());
}
