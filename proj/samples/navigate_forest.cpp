// Drives through one seeded forest and prints the outcome; the trace goes to
// stdout with --trace.
//
//   navigate_forest [seed] [--trace]

#include "tnav/sim/scenario.hpp"
#include "tnav/sim/world.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  using namespace tnav;
  std::uint64_t seed = 1;
  bool trace = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--trace") == 0)
      trace = true;
    else
      seed = std::strtoull(argv[i], nullptr, 10);
  }

  sim::ScenarioConfig cfg;
  auto& p = cfg.params;
  p.nav.map.resolution = p.nav.grid.voxel_size;
  p.nav.map.bound_radius = p.nav.grid.extent().norm();
  p.nav.heuristics.alpha_crash = 0.05;
  p.nav.heuristics.lambda_close = 1.0;
  p.nav.control.mu_min = 0.3;

  sim::ForestOptions forest;
  forest.keep_out = {{-2.0, 5.0, 1.0}, {12.0, 5.0, 1.0}};
  cfg.world = sim::generate_forest_map(100.0, 0.2, seed, forest);
  cfg.start.p = {-2.0, 5.0, 1.5};
  cfg.goals = {{12.0, 5.0, 1.5}};
  cfg.time_limit = 40.0;

  const auto r = sim::run_scenario(cfg);
  if (trace) sim::write_trace(std::cout, r.trace);
  std::fprintf(stderr, "%zu trees, %s after %.2f s, path %.2f m\n", cfg.world.obstacles.size(),
               std::string(sim::to_string(r.outcome)).c_str(), r.duration, r.path_length);
  return r.outcome == sim::Outcome::Success ? 0 : 1;
}
