#include <doctest.h>

#include <regex>

#include "mapf/obs.hpp"
#include "mapf/viz.hpp"
#include "oracles.hpp"
#include "scene.hpp"

using namespace mapf;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

GlobalState empty_state(int w, int h) {
  GlobalState s;
  s.width = w;
  s.height = h;
  s.obstacles.assign(static_cast<std::size_t>(w * h), 0);
  return s;
}

}  // namespace

TEST_CASE("console rendering") {
  auto s = empty_state(2, 2);
  CHECK(render_console(s) == "..\n..");
  s.obstacles[1] = 1;
  CHECK(render_console(s) == ".#\n..");
  s.positions = {{1, 0}};
  s.goals = {{1, 1}};
  s.active = {1};
  CHECK(render_console(s) == ".#\n0*");
  s.active = {0};
  CHECK(render_console(s) == ".#\n..");
}

TEST_CASE("empty frame has one cell per square and no circles") {
  const auto svg = render_frame(empty_state(2, 2));
  CHECK(count(svg, "class=\"cell\"") == 4);
  CHECK(count(svg, "<circle") == 0);
  CHECK(count(svg, "class=\"obstacle\"") == 0);
}

TEST_CASE("frame completeness and palette agreement") {
  auto env = scene::env8();
  const auto state = export_global_state(env);
  const auto svg = render_frame(state);
  std::size_t obstacles = 0;
  for (const auto v : state.obstacles) obstacles += v;
  CHECK(count(svg, "class=\"obstacle\"") == obstacles);
  CHECK(count(svg, "class=\"agent\"") == 3);
  CHECK(count(svg, "class=\"goal\"") == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(count(svg, "fill=\"" + agent_color(i) + "\"") == 1);
    CHECK(count(svg, "stroke=\"" + agent_color(i) + "\"") == 1);
  }
  CHECK(svg == render_frame(state));

  SvgStyle ego;
  ego.ego_agent = 1;
  ego.ego_radius = 2;
  CHECK(count(render_frame(state, ego), "class=\"ego\"") == 1);
}

TEST_CASE("palette is stable and distinct for the first agents") {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 64; ++i) {
    const auto c = agent_color(i);
    CHECK(std::regex_match(c, std::regex("#[0-9a-f]{6}")));
    seen.insert(c);
    CHECK(c == agent_color(i));
  }
  CHECK(seen.size() >= 60);
}

TEST_CASE("animation structure") {
  const auto t = scene::trajectory10();
  CHECK(t.steps() == 11);
  CHECK_NOTHROW(t.validate());
  const auto svg = render_animation(t, 0.25);
  CHECK(count(svg, "class=\"agent\"") == 3);
  CHECK(count(svg, "attributeName=\"opacity\"") >= 2);
  CHECK(svg.find("dur=\"2.5s\"") != std::string::npos);
  CHECK(svg == render_animation(t, 0.25));
  // Agent 0 disappears: its opacity track ends at 0.
  const auto agent0 = svg.find("<circle class=\"agent\"");
  const auto track = svg.find("attributeName=\"opacity\"", agent0);
  const auto values = svg.find("values=\"", track);
  const auto end = svg.find('"', values + 8);
  const auto list = svg.substr(values + 8, end - values - 8);
  CHECK(list.back() == '0');
}

TEST_CASE("single-step trajectory renders the static frame") {
  auto t = scene::trajectory10();
  t.positions.resize(1);
  t.goals.resize(1);
  t.active.resize(1);
  CHECK(render_animation(t) == render_frame(t.snapshot(0)));
}

TEST_CASE("inconsistent trajectories are rejected") {
  auto t = scene::trajectory10();
  t.goals.pop_back();
  CHECK_THROWS_AS(render_animation(t), std::invalid_argument);
  auto u = scene::trajectory10();
  u.positions[3].pop_back();
  CHECK_THROWS_AS(render_animation(u), std::invalid_argument);
  Trajectory empty;
  CHECK_THROWS_AS(render_animation(empty), std::invalid_argument);
}

TEST_CASE("golden files") {
  const auto frame = render_frame(export_global_state(scene::env8()));
  CHECK(scene::matches_golden("frame_8x8.svg", frame));
  CHECK(scene::matches_golden("animation_10.svg", render_animation(scene::trajectory10(), 0.3)));
}
