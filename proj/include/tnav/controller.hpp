#pragma once

#include "tnav/errors.hpp"
#include "tnav/pose.hpp"
#include "tnav/tentacles.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace tnav {

struct ControlParams {
  double alpha_omega = 1.0;
  double mu_nom = 1.0;
  double delta_mu = 0.1;
  double mu_max = 1.5;
  double mu_min = 0.0;
  double omega_max_phi = deg2rad(90.0);
  double d_t = 0.05;

  void validate() const {
    if (!(alpha_omega > 0.0 && alpha_omega <= 1.0))
      throw ConfigError("controller: alpha_omega must lie in (0,1]");
    if (!(mu_min >= 0.0)) throw ConfigError("controller: mu_min must be >= 0");
    if (!(mu_min <= mu_nom && mu_nom <= mu_max))
      throw ConfigError("controller: mu_min <= mu_nom <= mu_max violated");
    if (!(delta_mu > 0.0)) throw ConfigError("controller: delta_mu must be > 0");
    if (!(omega_max_phi > 0.0)) throw ConfigError("controller: omega_max_phi must be > 0");
    if (!(d_t > 0.0)) throw ConfigError("controller: d_t must be > 0");
  }
};

struct ControlState {
  double mu_t = 0.0;
  std::optional<std::size_t> prev_best;
};

/// Desired pose for the next cycle, relative to the current robot frame.
struct PoseCommand {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  double yaw = 0.0;
};

struct NextPose {
  PoseCommand command;
  ControlState state;
};

namespace detail {

inline double ramp_toward(double mu, double target, double step) {
  if (target >= mu) return target - mu > step ? mu + step : target;
  return mu - target > step ? mu - step : target;
}

}  // namespace detail

/// Turns the chosen tentacle into a feasible next pose: yaw toward the
/// tentacle clamped to one cycle of turn rate, lateral speed ramped toward
/// nominal (braking near the goal), then a step of mu_t * d_t toward the
/// navigation point at k_obs. Without a tentacle the robot holds position.
inline NextPose calculate_next_pose(const Tentacle* best, std::optional<std::size_t> k_obs,
                                    const Vec3& goal_robot, const ControlParams& params,
                                    ControlState state) {
  NextPose out;
  if (best == nullptr) {
    state.mu_t = std::clamp(state.mu_t - params.delta_mu, params.mu_min, params.mu_max);
    out.state = state;
    return out;
  }

  const double phi_max = params.omega_max_phi * params.d_t;
  const Vec3& first = best->nav_points.front();
  double phi = std::atan2(first.y(), first.x());
  if (std::abs(phi) > phi_max) phi = std::copysign(phi_max, phi);
  phi *= params.alpha_omega;
  out.command.yaw = phi;
  out.command.orientation = yaw_rotation(phi);

  double mu = detail::ramp_toward(state.mu_t, params.mu_nom, params.delta_mu);
  if (goal_robot.norm() < 0.25 * best->length) mu -= 2.0 * params.delta_mu;
  if (mu > params.mu_max)
    mu = params.mu_max;
  else if (mu < params.mu_min)
    mu = params.mu_min;
  state.mu_t = mu;

  const Vec3& target = best->point(k_obs.value_or(best->point_count()));
  const double reach = target.norm();
  const double chi = std::min(mu * params.d_t, reach);
  out.command.position = reach > 0.0 ? Vec3(target * (chi / reach)) : Vec3::Zero();
  out.state = state;
  return out;
}

}  // namespace tnav
