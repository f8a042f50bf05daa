#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "mapf/grid.hpp"
#include "mapf/rng.hpp"
#include "oracles.hpp"

using namespace mapf;

TEST_CASE("counter rng is a pure function of seed, stream and position") {
  CounterRng a(42, Stream::Policy);
  CounterRng b(42, Stream::Policy);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(a.draws() == 100);

  CounterRng other_stream(42, Stream::GoalRefresh);
  CounterRng other_sub(42, Stream::Policy, 1);
  CounterRng fresh(42, Stream::Policy);
  const auto x = fresh.next();
  CHECK(other_stream.next() != x);
  CHECK(other_sub.next() != x);
}

TEST_CASE("below stays in range and is roughly uniform") {
  CounterRng rng(7, Stream::InstanceSampling);
  std::array<int, 6> counts{};
  constexpr int kDraws = 60000;
  for (int i = 0; i < kDraws; ++i) {
    const auto v = rng.below(6);
    REQUIRE(v < 6);
    ++counts[v];
  }
  // Binomial(60000, 1/6): sd ~ 91; 5 sd bound.
  for (const int c : counts) CHECK(std::abs(c - kDraws / 6) < 460);
  CHECK(rng.below(1) == 0);
}

TEST_CASE("unit draws lie in [0, 1)") {
  CounterRng rng(3, Stream::MapGeneration);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("shuffle permutes") {
  CounterRng rng(1, Stream::Policy);
  std::array<int, 10> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(std::span<int>(v));
  CHECK(std::set<int>(v.begin(), v.end()).size() == 10);
}

TEST_CASE("map grid validation and accessors") {
  CHECK_THROWS_AS(MapGrid(2, 2, {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(MapGrid(2, 1, {1, 1}), std::invalid_argument);
  const MapGrid g(3, 2, {0, 1, 0, 0, 0, 5}, "g");
  CHECK(g.free_count() == 4);
  CHECK(g.blocked({0, 1}));
  CHECK(g.blocked({1, 2}));
  CHECK(g.passable({1, 1}));
  CHECK_FALSE(g.passable({-1, 0}));
  CHECK_FALSE(g.passable({0, 3}));
  CHECK(g.cell_at(g.index({1, 2})) == Cell{1, 2});
  CHECK(g.free_cells().size() == 4);
  const auto renamed = g.renamed("h", MapFamily::Maze);
  CHECK(renamed == g);
  CHECK(renamed.name() == "h");
}

TEST_CASE("components agree with union-find") {
  const auto g = oracle::parse({
      "..#..",
      "..#..",
      "#####",
      ".#...",
  });
  const Components comps(g);
  const auto uf = oracle::connectivity(g);
  CHECK(comps.count() == static_cast<std::size_t>(uf.components));
  CHECK(comps.count() == 4);
  CHECK(comps.label(g.index({0, 2})) == Components::kBlocked);
  CHECK(comps.label(g.index({0, 0})) == comps.label(g.index({1, 1})));
  CHECK(comps.label(g.index({0, 0})) != comps.label(g.index({0, 3})));
  std::size_t total = 0;
  for (std::size_t l = 0; l < comps.count(); ++l) total += comps.members(static_cast<std::int32_t>(l)).size();
  CHECK(total == g.free_count());
}
