#pragma once

#include "tnav/controller.hpp"
#include "tnav/pose.hpp"
#include "tnav/sim/world.hpp"

#include <algorithm>
#include <cmath>

namespace tnav::sim {

/// Ideal first-order tracker: moves toward the commanded pose (given in the
/// current robot frame) as far as the speed and turn-rate limits allow in one
/// cycle, and reaches it exactly when within limits.
inline Pose step_robot(const Pose& pose, const PoseCommand& cmd, const RobotModel& model,
                       double d_t) {
  Pose next = pose;
  Vec3 displacement = pose.q * cmd.position;
  const double max_step = model.mu_max * d_t;
  const double step = displacement.norm();
  if (step > max_step) displacement *= max_step / step;
  next.p = pose.p + displacement;

  Quat turn = cmd.orientation.normalized();
  if (turn.w() < 0.0) turn.coeffs() *= -1.0;
  const double angle = 2.0 * std::acos(std::clamp(turn.w(), -1.0, 1.0));
  const double max_turn = model.omega_phi * d_t;
  if (angle > max_turn) turn = Quat::Identity().slerp(max_turn / angle, turn);
  next.q = (pose.q * turn).normalized();
  return next;
}

}  // namespace tnav::sim
