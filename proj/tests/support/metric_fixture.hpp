// Hand-built metric fixture shared by unit and acceptance tests.
#pragma once

#include <string>
#include <vector>

#include "mapf/record.hpp"

namespace metric_fixture {

using namespace mapf;

inline EpisodeRecord mapf_record(const std::string& map, const std::string& alias, std::int64_t soc, bool solved,
                          DatasetTag tag = DatasetTag::Random) {
  EpisodeRecord r;
  r.instance.map_name = map;
  r.instance.dataset_tag = tag;
  r.instance.num_agents = 64;
  r.instance.max_episode_steps = 256;
  r.algorithm_alias = alias;
  r.soc = soc;
  r.csr = solved;
  r.episode_length = 256;
  r.runtime_seconds = 1.0;
  return r;
}

// 3 algorithms x 4 instances. SoC table (x = unsolved):
//        I1    I2    I3   I4
//   A   100    50    x    64
//   B   125    40    x    64
//   C   200    x     x    80
// Scores: A = [1, .8, 0, 1], B = [.8, 1, 0, 1], C = [.5, 0, 0, .8].
inline std::vector<EpisodeRecord> fixture() {
  std::vector<EpisodeRecord> rs;
  const std::int64_t limit = 64 * 256;
  auto add = [&](const char* map, std::int64_t a, std::int64_t b, std::int64_t c) {
    rs.push_back(mapf_record(map, "A", a > 0 ? a : limit, a > 0));
    rs.push_back(mapf_record(map, "B", b > 0 ? b : limit, b > 0));
    rs.push_back(mapf_record(map, "C", c > 0 ? c : limit, c > 0));
  };
  add("I1", 100, 125, 200);
  add("I2", 50, 40, 0);
  add("I3", 0, 0, 0);
  add("I4", 64, 64, 80);
  rs[0].collisions.vertex = 1000;
  rs[0].collisions.edge = 638;
  return rs;
}

}  // namespace metric_fixture
