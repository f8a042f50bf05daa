#include <doctest.h>

#include "mapf/mapgen.hpp"
#include "oracles.hpp"

using namespace mapf;

TEST_CASE("random maps: degenerate densities, determinism and binomial band") {
  const auto empty = gen_random(7, 5, 0.0, 1);
  CHECK(empty.free_count() == 35);
  CHECK(gen_random(20, 20, 0.3, 11) == gen_random(20, 20, 0.3, 11));
  CHECK_FALSE(gen_random(20, 20, 0.3, 11) == gen_random(20, 20, 0.3, 12));
  CHECK_THROWS_AS(gen_random(4, 4, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_random(4, 4, -0.1, 0), std::invalid_argument);

  // 400 Bernoulli(0.3) cells: sd of the fraction is sqrt(0.21 / 400) = 0.0229;
  // the two-sided 99.9% band is +-3.29 sd = +-0.0754.
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto m = gen_random(20, 20, 0.3, seed);
    const double frac = 1.0 - static_cast<double>(m.free_count()) / 400.0;
    CHECK(frac >= 0.15);
    CHECK(frac <= 0.45);
    if (frac < 0.3 - 0.0754 || frac > 0.3 + 0.0754) ++outside;
  }
  CHECK(outside <= 3);
}

TEST_CASE("maze connectivity and tree structure") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto loops = gen_maze(21, 21, seed, 0.1);
    CHECK(oracle::connectivity(loops).components == 1);
    const auto tree = gen_maze(21, 21, seed, 0.0);
    const auto c = oracle::connectivity(tree);
    CHECK(c.components == 1);
    CHECK(c.adjacencies == c.free_cells - 1);
  }
  CHECK(gen_maze(17, 19, 4) == gen_maze(17, 19, 4));
  CHECK(oracle::connectivity(gen_maze(18, 20, 2)).components == 1);
  CHECK_THROWS_AS(gen_maze(2, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_maze(5, 5, 0, 1.5), std::invalid_argument);
}

TEST_CASE("warehouse footprint, connectivity and symmetry") {
  const auto w = gen_warehouse();
  CHECK(w.height() == 33);
  CHECK(w.width() == 46);
  CHECK(oracle::connectivity(w).components == 1);
  CHECK(w == gen_warehouse());

  WarehouseParams small;
  small.shelf_width = 2;
  small.shelf_height = 2;
  small.aisle_width = 1;
  small.shelves_per_row = 4;
  small.shelf_rows = 3;
  const auto s = gen_warehouse(small);
  CHECK(s.width() == small.width());
  CHECK(oracle::connectivity(s).components == 1);

  for (const auto& m : {w, s}) {
    for (int r = 0; r < m.height(); ++r) {
      for (int c = 0; c < m.width(); ++c) {
        REQUIRE(m.blocked({r, c}) == m.blocked({r, m.width() - 1 - c}));
      }
    }
  }

  WarehouseParams bad;
  bad.aisle_width = 0;
  CHECK_THROWS_AS(gen_warehouse(bad), std::invalid_argument);
}
