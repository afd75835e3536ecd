#pragma once

#include "tnav/errors.hpp"
#include "tnav/local_map.hpp"
#include "tnav/pose.hpp"
#include "tnav/sim/world.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace tnav::sim {

/// Analytic depth sensor looking along +x of its frame.
struct SensorConfig {
  double h_fov = deg2rad(90.0);
  double v_fov = deg2rad(60.0);
  double resolution = deg2rad(1.0);
  Vec3 range = Vec3(10.0, 10.0, 10.0);  // max range along the sensor x, y, z axes
  double rate = 20.0;                    // f_S, Hz
  bool sense_ground = true;

  /// Range along a unit sensor-frame direction (axis-aligned ellipsoid).
  double range_along(const Vec3& dir) const {
    const Vec3 scaled = dir.cwiseQuotient(range);
    return 1.0 / scaled.norm();
  }
  double max_range() const { return range.maxCoeff(); }

  void validate() const {
    if (!(h_fov > 0.0) || !(v_fov > 0.0)) throw ConfigError("sensor: field of view must be > 0");
    if (!(resolution > 0.0)) throw ConfigError("sensor: angular resolution must be > 0");
    if (!(range.minCoeff() > 0.0)) throw ConfigError("sensor: rho_x, rho_y, rho_z must be > 0");
    if (!(rate > 0.0)) throw ConfigError("sensor: rate must be > 0");
  }
};

/// Smallest t >= 0 at which origin + t * dir (|dir| = 1) meets the cylinder's
/// mantle or top cap.
inline std::optional<double> intersect_cylinder(const Vec3& origin, const Vec3& dir,
                                                const Cylinder& c) {
  std::optional<double> best;
  auto consider = [&](double t) {
    if (t >= 0.0 && (!best || t < *best)) best = t;
  };
  const double ox = origin.x() - c.x;
  const double oy = origin.y() - c.y;
  const double a = dir.x() * dir.x() + dir.y() * dir.y();
  if (a > 1e-12) {
    const double b = ox * dir.x() + oy * dir.y();
    const double cc = ox * ox + oy * oy - c.radius * c.radius;
    const double disc = b * b - a * cc;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      for (double t : {(-b - root) / a, (-b + root) / a}) {
        const double z = origin.z() + t * dir.z();
        if (z >= 0.0 && z <= c.height) consider(t);
      }
    }
  }
  if (std::abs(dir.z()) > 1e-12) {
    const double t = (c.height - origin.z()) / dir.z();
    const double px = ox + t * dir.x();
    const double py = oy + t * dir.y();
    if (px * px + py * py <= c.radius * c.radius) consider(t);
  }
  return best;
}

/// Raycasts the sensor lattice (symmetric about the optical axis, so the
/// central ray is always present) and returns the nearest hit per ray in the
/// sensor frame, each with belief 1.
inline PointCloud sense(const WorldMap& world, const Pose& sensor, const SensorConfig& cfg,
                        double stamp = 0.0) {
  PointCloud cloud;
  cloud.stamp = stamp;
  const int nh = static_cast<int>(std::floor(0.5 * cfg.h_fov / cfg.resolution + 1e-9));
  const int nv = static_cast<int>(std::floor(0.5 * cfg.v_fov / cfg.resolution + 1e-9));
  const Eigen::Matrix3d rot = sensor.q.toRotationMatrix();

  // Obstacles that can be reached at all within range.
  std::vector<const Cylinder*> near;
  for (const auto& c : world.obstacles)
    if (std::hypot(c.x - sensor.p.x(), c.y - sensor.p.y()) <= cfg.max_range() + c.radius)
      near.push_back(&c);

  for (int iv = -nv; iv <= nv; ++iv) {
    const double el = iv * cfg.resolution;
    for (int ih = -nh; ih <= nh; ++ih) {
      const double az = ih * cfg.resolution;
      const Vec3 local(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
      const Vec3 dir = rot * local;
      double hit = std::numeric_limits<double>::infinity();
      for (const Cylinder* c : near)
        if (auto t = intersect_cylinder(sensor.p, dir, *c)) hit = std::min(hit, *t);
      if (cfg.sense_ground && dir.z() < 0.0 && sensor.p.z() >= 0.0) hit = std::min(hit, -sensor.p.z() / dir.z());
      if (hit <= cfg.range_along(local)) cloud.points.push_back({hit * local, 1.0});
    }
  }
  return cloud;
}

}  // namespace tnav::sim
