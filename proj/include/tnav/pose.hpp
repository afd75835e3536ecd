#pragma once

#include <Eigen/Geometry>

#include <cmath>

namespace tnav {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

/// Position and orientation of a rigid body. Unless noted, expressed in the world frame.
struct Pose {
  Vec3 p = Vec3::Zero();
  Quat q = Quat::Identity();

  /// Maps a point from this pose's local frame into the parent frame.
  Vec3 transform(const Vec3& local) const { return p + q * local; }

  /// Maps a parent-frame point into this pose's local frame.
  Vec3 inverse_transform(const Vec3& parent) const { return q.conjugate() * (parent - p); }

  bool valid(double tol = 1e-9) const { return std::abs(q.norm() - 1.0) <= tol; }
};

inline Quat yaw_rotation(double yaw) { return Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())); }

inline double yaw_of(const Quat& q) {
  return std::atan2(2.0 * (q.w() * q.z() + q.x() * q.y()),
                    1.0 - 2.0 * (q.y() * q.y() + q.z() * q.z()));
}

constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace tnav
