#pragma once

#include "tnav/errors.hpp"
#include "tnav/pose.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tnav {

using VoxelIndex = std::uint32_t;

/// Geometry of the robot-centered lattice: cubic voxels of edge `voxel_size`,
/// `nx * ny * nz` of them, centered on the robot origin.
struct GridConfig {
  double voxel_size = 0.2;
  int nx = 110;
  int ny = 110;
  int nz = 110;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }

  /// Width, length and height of the grid.
  Vec3 extent() const { return voxel_size * Vec3(nx, ny, nz); }

  void validate() const {
    if (!(voxel_size > 0.0) || !std::isfinite(voxel_size))
      throw ConfigError("grid: d_v must be > 0");
    if (nx < 1 || ny < 1 || nz < 1) throw ConfigError("grid: n_v_x, n_v_y, n_v_z must be >= 1");
    if (nx % 2 != 0 || ny % 2 != 0 || nz % 2 != 0)
      throw ConfigError("grid: n_v_x, n_v_y, n_v_z must be even");
  }
};

namespace detail {

inline std::optional<int> axis_cell(double coord, double voxel_size, int count) {
  const double cell = static_cast<double>(count / 2) + std::floor(coord / voxel_size);
  if (!(cell >= 0.0) || cell >= static_cast<double>(count)) return std::nullopt;
  return static_cast<int>(cell);
}

inline double axis_center(int cell, double voxel_size, int count) {
  return (static_cast<double>(cell - count / 2) + 0.5) * voxel_size;
}

}  // namespace detail

/// Linear index of the voxel containing robot-frame point `p`, or nullopt when
/// `p` lies outside the grid. Points on an upper cell face belong to the next cell.
inline std::optional<VoxelIndex> linear_index(const Vec3& p, const GridConfig& cfg) {
  const auto ox = detail::axis_cell(p.x(), cfg.voxel_size, cfg.nx);
  const auto oy = detail::axis_cell(p.y(), cfg.voxel_size, cfg.ny);
  const auto oz = detail::axis_cell(p.z(), cfg.voxel_size, cfg.nz);
  if (!ox || !oy || !oz) return std::nullopt;
  return static_cast<VoxelIndex>(*ox + *oy * cfg.nx + *oz * cfg.nx * cfg.ny);
}

inline Vec3 voxel_center(VoxelIndex o, const GridConfig& cfg) {
  if (o >= cfg.voxel_count()) throw std::out_of_range("voxel_center: index " + std::to_string(o));
  const int plane = cfg.nx * cfg.ny;
  const int oz = static_cast<int>(o) / plane;
  const int rem = static_cast<int>(o) % plane;
  const int oy = rem / cfg.nx;
  const int ox = rem % cfg.nx;
  return {detail::axis_center(ox, cfg.voxel_size, cfg.nx),
          detail::axis_center(oy, cfg.voxel_size, cfg.ny),
          detail::axis_center(oz, cfg.voxel_size, cfg.nz)};
}

/// Anything that answers "belief at this world point" in [0,1].
template <class M>
concept OccupancySource = requires(const M& m, const Vec3& p) {
  { m.query(p) } -> std::convertible_to<double>;
};

/// Robot-fixed voxel lattice. Holds the voxel center positions (robot frame)
/// and one occupancy belief per voxel, both indexed by linear index.
class RobotCenteredGrid {
 public:
  explicit RobotCenteredGrid(const GridConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const std::size_t n = cfg_.voxel_count();
    if (n > std::numeric_limits<VoxelIndex>::max())
      throw ResourceError("grid: " + std::to_string(n) + " voxels exceed the 32-bit index range");
    try {
      positions_.resize(n);
      occupancy_.assign(n, 0.0f);
    } catch (const std::bad_alloc&) {
      throw ResourceError("grid: cannot allocate " + std::to_string(n) + " voxels");
    }
    const int plane = cfg_.nx * cfg_.ny;
    for (int z = 0; z < cfg_.nz; ++z) {
      const float cz = static_cast<float>(detail::axis_center(z, cfg_.voxel_size, cfg_.nz));
      for (int y = 0; y < cfg_.ny; ++y) {
        const float cy = static_cast<float>(detail::axis_center(y, cfg_.voxel_size, cfg_.ny));
        Eigen::Vector3f* row = positions_.data() + z * plane + y * cfg_.nx;
        for (int x = 0; x < cfg_.nx; ++x)
          row[x] = {static_cast<float>(detail::axis_center(x, cfg_.voxel_size, cfg_.nx)), cy, cz};
      }
    }
  }

  const GridConfig& config() const { return cfg_; }
  std::size_t size() const { return occupancy_.size(); }

  std::span<const Eigen::Vector3f> positions() const { return positions_; }
  std::span<const float> occupancy() const { return occupancy_; }

  Vec3 position(VoxelIndex o) const { return positions_.at(o).cast<double>(); }
  float occupancy(VoxelIndex o) const { return occupancy_.at(o); }

  void set_occupancy(VoxelIndex o, double belief) {
    occupancy_.at(o) = static_cast<float>(std::clamp(belief, 0.0, 1.0));
  }

  void clear() { std::fill(occupancy_.begin(), occupancy_.end(), 0.0f); }

  /// Re-reads the beliefs of the listed voxels from a world-frame map, with the
  /// grid placed at `robot`. Voxels not listed keep their previous value.
  template <OccupancySource Map>
  void refresh(const Pose& robot, const Map& map, std::span<const VoxelIndex> voxels) {
    const Eigen::Matrix3d rot = robot.q.toRotationMatrix();
    for (VoxelIndex o : voxels) {
      const Vec3 world = robot.p + rot * positions_[o].cast<double>();
      occupancy_[o] = static_cast<float>(std::clamp(static_cast<double>(map.query(world)), 0.0, 1.0));
    }
  }

  template <OccupancySource Map>
  void refresh_all(const Pose& robot, const Map& map) {
    const Eigen::Matrix3d rot = robot.q.toRotationMatrix();
    for (std::size_t o = 0; o < positions_.size(); ++o) {
      const Vec3 world = robot.p + rot * positions_[o].cast<double>();
      occupancy_[o] = static_cast<float>(std::clamp(static_cast<double>(map.query(world)), 0.0, 1.0));
    }
  }

 private:
  GridConfig cfg_;
  std::vector<Eigen::Vector3f> positions_;
  std::vector<float> occupancy_;
};

}  // namespace tnav
