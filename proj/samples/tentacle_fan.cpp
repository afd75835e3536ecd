// Builds the tentacle fan and its support/priority voxels for a grid, then
// prints a per-tentacle summary. Pass --dump to get the raw "j o beta m c" records.
//
//   tentacle_fan [d_v n_v n_phi n_theta] [--dump]

#include "tnav/navigator.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  using namespace tnav;
  GridConfig grid;
  TentacleConfig tc;
  bool dump = false;
  std::vector<const char*> pos;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--dump") == 0)
      dump = true;
    else
      pos.push_back(argv[i]);
  }
  if (pos.size() == 4) {
    grid.voxel_size = std::atof(pos[0]);
    grid.nx = grid.ny = grid.nz = std::atoi(pos[1]);
    tc.n_phi = std::atoi(pos[2]);
    tc.n_theta = std::atoi(pos[3]);
  } else if (!pos.empty()) {
    std::fprintf(stderr, "usage: tentacle_fan [d_v n_v n_phi n_theta] [--dump]\n");
    return 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto model = TentacleModel::build(tc, grid);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (dump) {
    model->voxels.dump(std::cout);
    return 0;
  }
  for (std::size_t j = 0; j < model->tentacles.size(); ++j) {
    const auto& t = model->tentacles[j];
    std::size_t prio = 0;
    for (const auto& r : model->voxels[j]) prio += r.priority();
    std::printf("%4zu yaw %7.2f pitch %7.2f  n_s %3zu  priority %6zu  support %6zu\n", j, rad2deg(t.yaw),
                rad2deg(t.pitch), t.point_count(), prio, model->voxels[j].size() - prio);
  }
  std::printf("%zu tentacles, %zu records, %zu distinct voxels of %zu, built in %.2f s\n", model->tentacles.size(),
              model->voxels.record_count(), model->referenced.size(), grid.voxel_count(), s);
}
