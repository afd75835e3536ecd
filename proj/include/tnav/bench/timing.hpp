#pragma once

#include "tnav/bench/config.hpp"
#include "tnav/grid.hpp"
#include "tnav/navigator.hpp"
#include "tnav/sim/robot.hpp"
#include "tnav/sim/scenario.hpp"
#include "tnav/sim/sensor.hpp"
#include "tnav/sim/world.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace tnav::bench {

struct TimingReport {
  TimingCase tc;
  std::size_t voxel_count = 0;
  std::size_t tentacle_count = 0;
  std::size_t record_count = 0;
  double array_init_s = 0.0;   // median over repeats
  double generation_s = 0.0;   // tentacle sampling + voxel extraction, median over repeats
  int cycles = 0;
  // per-cycle means after warm-up, milliseconds
  double map_update_ms = 0.0;
  double occupancy_heuristics_ms = 0.0;
  double selection_ms = 0.0;
  double next_pose_ms = 0.0;

  double cycle_ms() const { return map_update_ms + occupancy_heuristics_ms + selection_ms + next_pose_ms; }
  double rate_hz() const { return cycle_ms() > 0.0 ? 1000.0 / cycle_ms() : 0.0; }
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// returns freed heap pages to the OS so the next allocation starts cold
inline void release_free_memory() {
#if defined(__GLIBC__)
  malloc_trim(0);
#endif
}

template <class F>
double time_s(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Parameters of `base` with the grid and tentacle counts of one timing case.
inline sim::Parameters timing_parameters(const sim::Parameters& base, const TimingCase& tc) {
  sim::Parameters p = base;
  p.nav.grid = {tc.d_v, tc.n_v, tc.n_v, tc.n_v};
  p.nav.tentacles.n_phi = tc.n_phi;
  p.nav.tentacles.n_theta = tc.n_theta;
  p.nav.map.resolution = tc.d_v;
  p.nav.map.bound_radius = p.nav.grid.extent().norm();
  return p;
}

/// Measures one case: array initialization (cold, as at startup), tentacle
/// generation with voxel extraction, and the main loop driving through a seeded
/// forest. Phase means exclude the first `spec.warmup` cycles. Sensing and robot
/// motion are not timed.
inline TimingReport run_timing_case(const Config& cfg, const TimingCase& tc) {
  const sim::Parameters p = timing_parameters(cfg.params, tc);
  p.validate();
  const TimingSpec& spec = cfg.timing;
  TimingReport rep;
  rep.tc = tc;
  rep.voxel_count = p.nav.grid.voxel_count();

  std::vector<double> init;
  for (int i = 0; i < spec.init_repeats; ++i) {
    detail::release_free_memory();
    init.push_back(detail::time_s([&] { RobotCenteredGrid g(p.nav.grid); }));
  }
  rep.array_init_s = detail::median(init);

  std::shared_ptr<const TentacleModel> model;
  std::vector<double> gen;
  for (int i = 0; i < spec.init_repeats; ++i)
    gen.push_back(detail::time_s([&] { model = sim::build_model(p); }));
  rep.generation_s = detail::median(gen);
  rep.tentacle_count = model->tentacles.size();
  rep.record_count = model->voxels.record_count();

  // 20 x 20 m forest at the benchmark density, crossed along its middle.
  sim::ForestOptions fo;
  fo.keep_out = {{-2.0, 10.0, 1.0}};
  const sim::WorldMap world = sim::generate_forest_map(400.0, 0.2, sim::mix_seed(cfg.benchmark.seed, 0x7131), fo);
  const Vec3 goal(22.0, 10.0, cfg.scenario.altitude);
  Pose pose;
  pose.p = {-2.0, 10.0, cfg.scenario.altitude};

  Navigator nav(model, p.nav);
  PhaseTimes sum;
  const double d_t = p.nav.control.d_t;
  for (int c = 0; c < spec.warmup + spec.cycles; ++c) {
    const PointCloud cloud = sense(world, pose, p.sensor, c * d_t);
    const CycleOutput out = nav.step(pose, cloud, pose, goal);
    pose = sim::step_robot(pose, out.command, p.robot, d_t);
    if (c < spec.warmup) continue;
    const PhaseTimes& t = nav.last_phase_times();
    sum.map_update += t.map_update;
    sum.occupancy_heuristics += t.occupancy_heuristics;
    sum.selection += t.selection;
    sum.next_pose += t.next_pose;
  }
  rep.cycles = spec.cycles;
  const double k = 1000.0 / spec.cycles;
  rep.map_update_ms = sum.map_update * k;
  rep.occupancy_heuristics_ms = sum.occupancy_heuristics * k;
  rep.selection_ms = sum.selection * k;
  rep.next_pose_ms = sum.next_pose * k;
  return rep;
}

/// Runs every case serially.
inline std::vector<TimingReport> run_timing_probe(const Config& cfg) {
  std::vector<TimingReport> out;
  for (const auto& tc : cfg.timing.cases) out.push_back(run_timing_case(cfg, tc));
  return out;
}

inline std::string timing_csv(const std::vector<TimingReport>& reps) {
  std::string s =
      "d_v,n_v,n_phi,n_theta,voxels,tentacles,records,array_init_s,generation_s,map_update_ms,"
      "occupancy_heuristics_ms,selection_ms,next_pose_ms,cycle_ms,rate_hz\n";
  char line[512];
  for (const auto& r : reps) {
    std::snprintf(line, sizeof line, "%.6f,%d,%d,%d,%zu,%zu,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  r.tc.d_v, r.tc.n_v, r.tc.n_phi, r.tc.n_theta, r.voxel_count, r.tentacle_count,
                  r.record_count, r.array_init_s, r.generation_s, r.map_update_ms,
                  r.occupancy_heuristics_ms, r.selection_ms, r.next_pose_ms, r.cycle_ms(), r.rate_hz());
    s += line;
  }
  return s;
}

}  // namespace tnav::bench
