#pragma once

#include "tnav/errors.hpp"
#include "tnav/pose.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace tnav::sim {

struct Cylinder {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.5;
  double height = 5.0;

  friend bool operator==(const Cylinder&, const Cylinder&) = default;
};

struct Bounds {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double length() const { return ymax - ymin; }
  bool contains(double x, double y) const { return x >= xmin && x <= xmax && y >= ymin && y <= ymax; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Static ground-truth world: vertical cylinders standing on the z = 0 plane.
struct WorldMap {
  Bounds bounds;
  std::uint64_t seed = 0;
  std::vector<Cylinder> obstacles;

  void validate() const {
    for (const auto& c : obstacles) {
      if (!(c.radius > 0.0)) throw ConfigError("world: obstacle radius must be > 0");
      if (!(c.height > 0.0)) throw ConfigError("world: obstacle height must be > 0");
      if (!bounds.contains(c.x, c.y)) throw ConfigError("world: obstacle outside bounds");
    }
  }

  double min_radius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& c : obstacles) r = std::min(r, c.radius);
    return r;
  }

  friend bool operator==(const WorldMap&, const WorldMap&) = default;
};

/// Deterministic uniform draws. The std distributions are implementation
/// defined, so maps would differ across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Mixes several integers into one well-spread seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(a) ^ b) ^ c);
}

/// Disc that generated obstacles must stay clear of (start and goal areas).
struct KeepOut {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
};

struct CylinderMapOptions {
  int count = 30;
  double radius_min = 0.3;
  double radius_max = 0.6;
  double height = 6.0;
  double min_clearance = 0.64;  // surface-to-surface gap
  std::vector<KeepOut> keep_out;
  int attempts_per_obstacle = 1000;
};

namespace detail {

inline bool clear_of(const KeepOut& k, double x, double y, double r) {
  return std::hypot(x - k.x, y - k.y) >= k.radius + r;
}

}  // namespace detail

/// Seeded cylinder field on a 20 x 20 m square centered at the origin.
inline WorldMap generate_cylinder_map(std::uint64_t seed, const CylinderMapOptions& opt = {}) {
  WorldMap w;
  w.seed = seed;
  w.bounds = {-10.0, -10.0, 10.0, 10.0};
  Rng rng(seed);
  const long max_attempts = static_cast<long>(opt.attempts_per_obstacle) * std::max(opt.count, 1);
  long attempts = 0;
  while (static_cast<int>(w.obstacles.size()) < opt.count) {
    if (++attempts > max_attempts)
      throw GenerationError("cylinder map: cannot place " + std::to_string(opt.count) +
                            " obstacles with the requested clearance");
    const double r = rng.uniform(opt.radius_min, opt.radius_max);
    const double x = rng.uniform(w.bounds.xmin + r, w.bounds.xmax - r);
    const double y = rng.uniform(w.bounds.ymin + r, w.bounds.ymax - r);
    bool ok = std::all_of(opt.keep_out.begin(), opt.keep_out.end(),
                          [&](const KeepOut& k) { return detail::clear_of(k, x, y, r); });
    for (const auto& c : w.obstacles) {
      if (!ok) break;
      ok = std::hypot(x - c.x, y - c.y) - c.radius - r >= opt.min_clearance;
    }
    if (ok) w.obstacles.push_back({x, y, r, opt.height});
  }
  return w;
}

struct ForestOptions {
  double radius_min = 0.1;
  double radius_max = 0.3;
  double min_separation = 1.0;  // center to center
  double height = 5.0;
  std::vector<KeepOut> keep_out;
  int attempts_per_tree = 1000;
};

/// Square forest patch of the given area with its lower-left corner at the
/// origin and round(area * density) trees.
inline WorldMap generate_forest_map(double area, double density, std::uint64_t seed,
                                    const ForestOptions& opt = {}) {
  if (!(area > 0.0)) throw ConfigError("forest: area must be > 0");
  if (!(density >= 0.0)) throw ConfigError("forest: density must be >= 0");
  const double side = std::sqrt(area);
  const auto count = static_cast<long>(std::llround(area * density));
  WorldMap w;
  w.seed = seed;
  w.bounds = {0.0, 0.0, side, side};
  Rng rng(seed);
  const long max_attempts = static_cast<long>(opt.attempts_per_tree) * std::max(count, 1L);
  long attempts = 0;
  while (static_cast<long>(w.obstacles.size()) < count) {
    if (++attempts > max_attempts)
      throw GenerationError("forest: cannot place " + std::to_string(count) +
                            " trees with separation " + std::to_string(opt.min_separation));
    const double r = rng.uniform(opt.radius_min, opt.radius_max);
    const double x = rng.uniform(r, side - r);
    const double y = rng.uniform(r, side - r);
    bool ok = std::all_of(opt.keep_out.begin(), opt.keep_out.end(),
                          [&](const KeepOut& k) { return detail::clear_of(k, x, y, r); });
    for (const auto& c : w.obstacles) {
      if (!ok) break;
      ok = std::hypot(x - c.x, y - c.y) >= opt.min_separation;
    }
    if (ok) w.obstacles.push_back({x, y, r, opt.height});
  }
  return w;
}

/// Robot bounding box and kinematic limits.
struct RobotModel {
  double width = 0.3;    // w_R, along robot y
  double length = 0.3;   // l_R, along robot x
  double height = 0.2;   // h_R
  double mu_max = 1.5;
  double omega_phi = deg2rad(90.0);
  double omega_theta = deg2rad(90.0);
  double omega_psi = deg2rad(90.0);

  double diagonal() const { return std::hypot(width, length); }

  void validate() const {
    for (double v : {width, length, height, mu_max, omega_phi, omega_theta, omega_psi})
      if (!(v > 0.0)) throw ConfigError("robot: dimensions and limits must be > 0");
  }
};

/// True iff the yaw-oriented bounding box touches any cylinder (closed sets).
inline bool check_collision(const WorldMap& world, const Pose& pose, const RobotModel& robot) {
  const double yaw = yaw_of(pose.q);
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double hx = 0.5 * robot.length;
  const double hy = 0.5 * robot.width;
  const double z_lo = pose.p.z() - 0.5 * robot.height;
  const double z_hi = pose.p.z() + 0.5 * robot.height;
  for (const auto& cyl : world.obstacles) {
    if (z_hi < 0.0 || z_lo > cyl.height) continue;
    const double dx = cyl.x - pose.p.x();
    const double dy = cyl.y - pose.p.y();
    const double lx = c * dx + s * dy;
    const double ly = -s * dx + c * dy;
    const double qx = lx - std::clamp(lx, -hx, hx);
    const double qy = ly - std::clamp(ly, -hy, hy);
    if (qx * qx + qy * qy <= cyl.radius * cyl.radius) return true;
  }
  return false;
}

}  // namespace tnav::sim
