#pragma once

#include "tnav/errors.hpp"
#include "tnav/grid.hpp"
#include "tnav/pose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <new>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnav {

/// Offline parameters shaping the tentacle fan and the voxel classification
/// around each tentacle. Angles in radians, lengths in meters.
struct TentacleConfig {
  int n_phi = 31;
  int n_theta = 21;
  double phi_cov = deg2rad(60.0);
  double theta_cov = deg2rad(45.0);
  double l_t_max = 10.0;
  double delta_d = 0.35;
  double tau_P = 0.35;
  double tau_S = 0.5;
  double beta_max = 1.0;
  double alpha_beta = 10.0;

  int count() const { return n_phi * n_theta; }

  void validate() const {
    if (n_phi < 1 || n_theta < 1) throw ConfigError("tentacles: n_phi and n_theta must be >= 1");
    if (!(phi_cov >= 0.0) || !(theta_cov >= 0.0))
      throw ConfigError("tentacles: covered angles must be >= 0");
    if (!(l_t_max > 0.0)) throw ConfigError("tentacles: l_t_max must be > 0");
    if (!(delta_d > 0.0)) throw ConfigError("tentacles: delta_d must be > 0");
    if (!(tau_P > 0.0)) throw ConfigError("tentacles: tau_P must be > 0");
    if (!(tau_S > tau_P)) throw ConfigError("tentacles: tau_S must be greater than tau_P");
    if (!(beta_max > 0.0)) throw ConfigError("tentacles: beta_max must be > 0");
    if (!(alpha_beta > 0.0)) throw ConfigError("tentacles: alpha_beta must be > 0");
    if (alpha_beta * tau_P < 1.0)
      throw ConfigError("tentacles: alpha_beta * tau_P must be >= 1 so support weights stay below beta_max");
    if (std::ceil(l_t_max / delta_d) > std::numeric_limits<std::uint16_t>::max())
      throw ConfigError("tentacles: l_t_max / delta_d exceeds 65535 navigation points");
  }
};

/// A straight candidate trajectory fixed in the robot frame.
struct Tentacle {
  double yaw = 0.0;
  double pitch = 0.0;
  double length = 0.0;
  double spacing = 0.0;
  Vec3 direction = Vec3::UnitX();
  /// Navigation point k (1-based) is nav_points[k-1], at arc length k * spacing.
  std::vector<Vec3> nav_points;

  std::size_t point_count() const { return nav_points.size(); }
  const Vec3& point(std::size_t k) const { return nav_points.at(k - 1); }
};

using TentacleSet = std::vector<Tentacle>;

/// Length of the tentacle along a unit robot-frame direction.
using RangeFn = std::function<double(const Vec3&)>;

inline RangeFn constant_range(double range) {
  return [range](const Vec3&) { return range; };
}

/// Axis-aligned ellipsoid range model with semi-axes (rx, ry, rz).
inline RangeFn ellipsoid_range(double rx, double ry, double rz) {
  return [=](const Vec3& d) {
    const double s = (d.x() / rx) * (d.x() / rx) + (d.y() / ry) * (d.y() / ry) +
                     (d.z() / rz) * (d.z() / rz);
    return 1.0 / std::sqrt(s);
  };
}

/// Uniform samples over [-coverage/2, +coverage/2], both endpoints included;
/// a single sample sits at 0.
inline std::vector<double> sample_angles(int n, double coverage) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = 0.0;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = -0.5 * coverage + coverage * i / (n - 1);
  return out;
}

/// Unit direction for a yaw about +z and a pitch that raises the heading above the xy-plane.
inline Vec3 heading(double yaw, double pitch) {
  return {std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch)};
}

inline Tentacle make_tentacle(double yaw, double pitch, double length, double delta_d) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("tentacles: tentacle length must be finite and > 0");
  Tentacle t;
  t.yaw = yaw;
  t.pitch = pitch;
  t.length = length;
  t.direction = heading(yaw, pitch);
  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(length / delta_d - 1e-9)));
  t.spacing = length / static_cast<double>(count);
  t.nav_points.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    const double s = (k == count) ? length : t.spacing * static_cast<double>(k);
    t.nav_points.push_back(s * t.direction);
  }
  return t;
}

/// Builds the n_phi x n_theta fan. Tentacle j = i_theta * n_phi + i_phi, both
/// angle indices ascending from the negative coverage edge.
inline TentacleSet sample_tentacles(const TentacleConfig& cfg, const RangeFn& range = {}) {
  cfg.validate();
  const auto yaws = sample_angles(cfg.n_phi, cfg.phi_cov);
  const auto pitches = sample_angles(cfg.n_theta, cfg.theta_cov);
  TentacleSet set;
  set.reserve(static_cast<std::size_t>(cfg.count()));
  for (double pitch : pitches) {
    for (double yaw : yaws) {
      double len = cfg.l_t_max;
      if (range) len = std::min(len, range(heading(yaw, pitch)));
      set.push_back(make_tentacle(yaw, pitch, len, cfg.delta_d));
    }
  }
  return set;
}

enum class VoxelClass : std::uint8_t { Support = 0, Priority = 1 };

/// A grid voxel attached to one tentacle: its index, occupancy weight, the
/// 1-based index of the closest navigation point and its class.
struct VoxelRecord {
  VoxelIndex index = 0;
  float weight = 0.0f;
  std::uint16_t nav_point = 1;
  VoxelClass cls = VoxelClass::Support;

  bool priority() const { return cls == VoxelClass::Priority; }
};

inline double occupancy_weight(VoxelClass cls, double distance, const TentacleConfig& cfg) {
  if (cls == VoxelClass::Priority) return cfg.beta_max;
  if (!(distance > cfg.tau_P))
    throw std::logic_error("occupancy_weight: support voxel closer than tau_P");
  return cfg.beta_max / (cfg.alpha_beta * distance);
}

struct ClosestPoint {
  std::size_t k = 1;  // 1-based
  double distance = 0.0;
};

/// Closest navigation point to `p`. The points are collinear and evenly spaced,
/// so only the neighbours of the projected arc length can be the minimum.
/// Equidistant points resolve to the lower index.
inline ClosestPoint closest_nav_point(const Tentacle& t, const Vec3& p) {
  const auto n = static_cast<long>(t.nav_points.size());
  const double along = p.dot(t.direction) / t.spacing;
  const long guess = std::clamp(static_cast<long>(std::llround(along)), 1L, n);
  ClosestPoint best{0, std::numeric_limits<double>::infinity()};
  for (long k = std::max(1L, guess - 1); k <= std::min(n, guess + 1); ++k) {
    const double d = (p - t.nav_points[static_cast<std::size_t>(k - 1)]).norm();
    if (d < best.distance) best = {static_cast<std::size_t>(k), d};
  }
  return best;
}

/// Support and Priority voxels of every tentacle; records of one tentacle are
/// ordered by voxel index.
struct ClassifiedVoxels {
  std::vector<std::vector<VoxelRecord>> per_tentacle;

  std::size_t tentacle_count() const { return per_tentacle.size(); }
  const std::vector<VoxelRecord>& operator[](std::size_t j) const { return per_tentacle.at(j); }

  std::size_t record_count() const {
    std::size_t n = 0;
    for (const auto& r : per_tentacle) n += r.size();
    return n;
  }

  /// Sorted union of all voxel indices referenced by any tentacle.
  std::vector<VoxelIndex> referenced_voxels() const {
    std::vector<VoxelIndex> all;
    all.reserve(record_count());
    for (const auto& recs : per_tentacle)
      for (const auto& r : recs) all.push_back(r.index);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
  }

  /// Plain-text export, one "j o beta m c" line per record.
  void dump(std::ostream& os) const {
    char line[96];
    for (std::size_t j = 0; j < per_tentacle.size(); ++j) {
      for (const auto& r : per_tentacle[j]) {
        std::snprintf(line, sizeof line, "%zu %u %.6f %u %u\n", j, r.index,
                      static_cast<double>(r.weight), static_cast<unsigned>(r.nav_point),
                      static_cast<unsigned>(r.cls));
        os << line;
      }
    }
  }
};

/// Classifies the voxels around one tentacle. Only voxels inside the bounding
/// box of the tentacle grown by tau_S are visited.
inline std::vector<VoxelRecord> classify_tentacle(const Tentacle& t, const TentacleConfig& cfg,
                                                  const GridConfig& grid) {
  Vec3 lo = t.nav_points.front().cwiseMin(t.nav_points.back()).array() - cfg.tau_S;
  Vec3 hi = t.nav_points.front().cwiseMax(t.nav_points.back()).array() + cfg.tau_S;
  const int counts[3] = {grid.nx, grid.ny, grid.nz};
  int first[3];
  int last[3];
  for (int a = 0; a < 3; ++a) {
    const double half = counts[a] / 2;
    first[a] = std::max(0, static_cast<int>(half + std::floor(lo[a] / grid.voxel_size)));
    last[a] = std::min(counts[a] - 1, static_cast<int>(half + std::floor(hi[a] / grid.voxel_size)));
  }
  std::vector<VoxelRecord> out;
  for (int z = first[2]; z <= last[2]; ++z) {
    const double cz = detail::axis_center(z, grid.voxel_size, grid.nz);
    for (int y = first[1]; y <= last[1]; ++y) {
      const double cy = detail::axis_center(y, grid.voxel_size, grid.ny);
      for (int x = first[0]; x <= last[0]; ++x) {
        const Vec3 c(detail::axis_center(x, grid.voxel_size, grid.nx), cy, cz);
        const ClosestPoint cp = closest_nav_point(t, c);
        if (cp.distance > cfg.tau_S) continue;
        const VoxelClass cls = cp.distance <= cfg.tau_P ? VoxelClass::Priority : VoxelClass::Support;
        out.push_back({static_cast<VoxelIndex>(x + y * grid.nx + z * grid.nx * grid.ny),
                       static_cast<float>(occupancy_weight(cls, cp.distance, cfg)),
                       static_cast<std::uint16_t>(cp.k), cls});
      }
    }
  }
  return out;
}

inline ClassifiedVoxels extract_support_priority(const TentacleSet& tentacles,
                                                 const TentacleConfig& cfg,
                                                 const GridConfig& grid) {
  cfg.validate();
  grid.validate();
  ClassifiedVoxels result;
  try {
    result.per_tentacle.reserve(tentacles.size());
    for (const auto& t : tentacles) result.per_tentacle.push_back(classify_tentacle(t, cfg, grid));
  } catch (const std::bad_alloc&) {
    throw ResourceError("tentacles: cannot allocate voxel records");
  }
  return result;
}

}  // namespace tnav
