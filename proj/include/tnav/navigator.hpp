#pragma once

#include "tnav/controller.hpp"
#include "tnav/grid.hpp"
#include "tnav/heuristics.hpp"
#include "tnav/local_map.hpp"
#include "tnav/pose.hpp"
#include "tnav/tentacles.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace tnav {

/// Offline and online parameters of the planner itself.
struct NavigatorConfig {
  GridConfig grid;
  TentacleConfig tentacles;
  LocalMapConfig map;
  HeuristicParams heuristics;
  ControlParams control;

  void validate() const {
    grid.validate();
    tentacles.validate();
    map.validate();
    heuristics.validate();
    control.validate();
  }
};

/// Tentacles and their classified voxels. Built once, then read-only and
/// shareable between navigators.
struct TentacleModel {
  TentacleConfig config;
  GridConfig grid;
  TentacleSet tentacles;
  ClassifiedVoxels voxels;
  std::vector<VoxelIndex> referenced;

  static std::shared_ptr<const TentacleModel> build(const TentacleConfig& cfg,
                                                    const GridConfig& grid,
                                                    const RangeFn& range = {}) {
    auto m = std::make_shared<TentacleModel>();
    m->config = cfg;
    m->grid = grid;
    m->tentacles = sample_tentacles(cfg, range);
    m->voxels = extract_support_priority(m->tentacles, cfg, grid);
    m->referenced = m->voxels.referenced_voxels();
    return m;
  }
};

/// Wall-clock duration of each phase of the last cycle, seconds.
struct PhaseTimes {
  double map_update = 0.0;
  double occupancy_heuristics = 0.0;
  double selection = 0.0;
  double next_pose = 0.0;

  double total() const { return map_update + occupancy_heuristics + selection + next_pose; }
};

struct CycleOutput {
  std::optional<std::size_t> best;
  std::optional<std::size_t> k_obs;
  PoseCommand command;
  double mu_t = 0.0;
};

/// One reactive navigation loop: local map, robot-centered grid, tentacle
/// evaluation and next-pose control.
class Navigator {
 public:
  Navigator(std::shared_ptr<const TentacleModel> model, const NavigatorConfig& cfg)
      : model_(std::move(model)), cfg_(cfg), grid_(model_->grid), map_(cfg.map) {
    cfg_.validate();
  }

  CycleOutput step(const Pose& robot, const PointCloud& cloud, const Pose& sensor_pose,
                   const Vec3& goal_world) {
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::time_point a, clock::time_point b) {
      return std::chrono::duration<double>(b - a).count();
    };

    const auto t0 = clock::now();
    map_.insert_cloud(cloud, sensor_pose);
    map_.prune(robot.p);

    const auto t1 = clock::now();
    grid_.refresh(robot, map_, model_->referenced);
    const Vec3 goal_robot = robot.inverse_transform(goal_world);
    last_eval_ = evaluate_tentacles(model_->tentacles, model_->voxels, grid_.occupancy(), goal_robot,
                                    state_.prev_best, cfg_.heuristics);

    const auto t2 = clock::now();
    const std::optional<std::size_t> best = select_best(last_eval_.evals);

    const auto t3 = clock::now();
    CycleOutput out;
    out.best = best;
    const Tentacle* tentacle = nullptr;
    if (best) {
      tentacle = &model_->tentacles[*best];
      out.k_obs = last_eval_.summaries[*best].k_obs;
    }
    NextPose next = calculate_next_pose(tentacle, out.k_obs, goal_robot, cfg_.control, state_);
    if (best) next.state.prev_best = best;
    state_ = next.state;
    out.command = next.command;
    out.mu_t = state_.mu_t;

    const auto t4 = clock::now();
    times_ = {seconds(t0, t1), seconds(t1, t2), seconds(t2, t3), seconds(t3, t4)};
    return out;
  }

  const TentacleModel& model() const { return *model_; }
  const NavigatorConfig& config() const { return cfg_; }
  const RobotCenteredGrid& grid() const { return grid_; }
  const OccupancyMap& map() const { return map_; }
  const ControlState& state() const { return state_; }
  const PhaseTimes& last_phase_times() const { return times_; }
  const CycleEvaluation& last_evaluation() const { return last_eval_; }

 private:
  std::shared_ptr<const TentacleModel> model_;
  NavigatorConfig cfg_;
  RobotCenteredGrid grid_;
  OccupancyMap map_;
  ControlState state_;
  CycleEvaluation last_eval_;
  PhaseTimes times_;
};

}  // namespace tnav
