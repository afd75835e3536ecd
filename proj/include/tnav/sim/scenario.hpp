#pragma once

#include "tnav/errors.hpp"
#include "tnav/navigator.hpp"
#include "tnav/pose.hpp"
#include "tnav/sim/robot.hpp"
#include "tnav/sim/sensor.hpp"
#include "tnav/sim/world.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tnav::sim {

/// Every parameter group: robot, sensor and planner.
struct Parameters {
  RobotModel robot;
  SensorConfig sensor;
  NavigatorConfig nav;

  void validate() const {
    robot.validate();
    sensor.validate();
    nav.validate();
    if (nav.control.mu_max > robot.mu_max)
      throw ConfigError("parameters: controller mu_max exceeds the robot's mu_max");
  }
};

struct ScenarioConfig {
  WorldMap world;
  Pose start;
  std::vector<Vec3> goals;
  double goal_tolerance = 0.5;
  double time_limit = 60.0;
  Parameters params;

  void validate() const {
    params.validate();
    world.validate();
    if (goals.empty()) throw ConfigError("scenario: goal list is empty");
    if (!(goal_tolerance > 0.0)) throw ConfigError("scenario: goal tolerance must be > 0");
    if (!(time_limit > 0.0)) throw ConfigError("scenario: time limit must be > 0");
    if (!start.valid()) throw ConfigError("scenario: start orientation is not a unit quaternion");
    const double step = params.robot.mu_max * params.nav.control.d_t;
    if (!world.obstacles.empty() && !(step < world.min_radius()))
      throw ConfigError("scenario: mu_max * d_t must be below the smallest obstacle radius");
  }
};

enum class Outcome { Success, Collision, Timeout };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Collision: return "collision";
    case Outcome::Timeout: return "timeout";
  }
  return "unknown";
}

struct TraceRecord {
  double t = 0.0;
  Pose pose;
  long best = -1;  // -1 when no tentacle was navigable
  double mu_t = 0.0;
};

struct ScenarioResult {
  Outcome outcome = Outcome::Timeout;
  double duration = 0.0;
  double path_length = 0.0;
  std::vector<TraceRecord> trace;
};

inline double path_length(const std::vector<TraceRecord>& trace) {
  double len = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) len += (trace[i].pose.p - trace[i - 1].pose.p).norm();
  return len;
}

inline std::shared_ptr<const TentacleModel> build_model(const Parameters& params) {
  const Vec3 r = params.sensor.range;
  return TentacleModel::build(params.nav.tentacles, params.nav.grid,
                              ellipsoid_range(r.x(), r.y(), r.z()));
}

/// Closed loop: sense, update the local map, evaluate, select, command, move,
/// check for collision, until every goal is reached in order, the time limit
/// passes or the robot collides.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg,
                                   std::shared_ptr<const TentacleModel> model = nullptr) {
  cfg.validate();
  if (!model) model = build_model(cfg.params);
  Navigator nav(model, cfg.params.nav);
  const double d_t = cfg.params.nav.control.d_t;

  ScenarioResult result;
  Pose pose = cfg.start;
  std::size_t goal = 0;
  long cycle = 0;
  double t = 0.0;
  result.trace.push_back({t, pose, -1, nav.state().mu_t});
  while (true) {
    while (goal < cfg.goals.size() && (pose.p - cfg.goals[goal]).norm() <= cfg.goal_tolerance) ++goal;
    if (goal == cfg.goals.size()) {
      result.outcome = Outcome::Success;
      break;
    }
    if (t >= cfg.time_limit) {
      result.outcome = Outcome::Timeout;
      break;
    }
    const PointCloud cloud = sense(cfg.world, pose, cfg.params.sensor, t);
    const CycleOutput out = nav.step(pose, cloud, pose, cfg.goals[goal]);
    pose = step_robot(pose, out.command, cfg.params.robot, d_t);
    ++cycle;
    t = static_cast<double>(cycle) * d_t;
    result.trace.push_back({t, pose, out.best ? static_cast<long>(*out.best) : -1L, out.mu_t});
    if (check_collision(cfg.world, pose, cfg.params.robot)) {
      result.outcome = Outcome::Collision;
      break;
    }
  }
  result.duration = t;
  result.path_length = path_length(result.trace);
  return result;
}

/// One "t x y z qx qy qz qw j_best mu_t" line per record, 6-decimal floats.
inline void write_trace(std::ostream& os, const std::vector<TraceRecord>& trace) {
  char line[256];
  for (const auto& r : trace) {
    const auto& p = r.pose.p;
    const auto& q = r.pose.q;
    std::snprintf(line, sizeof line, "%.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %ld %.6f\n", r.t, p.x(),
                  p.y(), p.z(), q.x(), q.y(), q.z(), q.w(), r.best, r.mu_t);
    os << line;
  }
}

}  // namespace tnav::sim
