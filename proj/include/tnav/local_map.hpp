#pragma once

#include "tnav/errors.hpp"
#include "tnav/pose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace tnav {

/// One sensed point: sensor-frame position plus the sensor's occupancy belief.
struct CloudPoint {
  Vec3 position = Vec3::Zero();
  double belief = 1.0;
};

struct PointCloud {
  std::vector<CloudPoint> points;
  double stamp = 0.0;

  void add(const Vec3& p, double belief = 1.0) {
    if (!(belief >= 0.0 && belief <= 1.0))
      throw std::invalid_argument("point cloud: belief must lie in [0,1]");
    points.push_back({p, belief});
  }
  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

struct CellKey {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  friend bool operator==(const CellKey&, const CellKey&) = default;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    // splitmix64 finalizer over the packed coordinates
    std::uint64_t h = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.x)) << 42) ^
                      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.y)) << 21) ^
                      static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.z));
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }
};

struct LocalMapConfig {
  double resolution = 0.2;
  double bound_radius = 20.0;

  void validate() const {
    if (!(resolution > 0.0)) throw ConfigError("local map: resolution must be > 0");
    if (!(bound_radius > 0.0)) throw ConfigError("local map: bound_radius must be > 0");
  }
};

/// Bounded world-frame occupancy store. Each cell keeps the belief of the most
/// recent point that fell into it; cells never observed read as free (0).
class OccupancyMap {
 public:
  explicit OccupancyMap(const LocalMapConfig& cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  const LocalMapConfig& config() const { return cfg_; }
  double resolution() const { return cfg_.resolution; }
  double bound_radius() const { return cfg_.bound_radius; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  CellKey key_of(const Vec3& world) const {
    const double inv = 1.0 / cfg_.resolution;
    return {static_cast<std::int32_t>(std::floor(world.x() * inv)),
            static_cast<std::int32_t>(std::floor(world.y() * inv)),
            static_cast<std::int32_t>(std::floor(world.z() * inv))};
  }

  Vec3 center_of(const CellKey& k) const {
    return cfg_.resolution * Vec3(k.x + 0.5, k.y + 0.5, k.z + 0.5);
  }

  void insert_cloud(const PointCloud& cloud, const Pose& sensor_pose) {
    const Eigen::Matrix3d rot = sensor_pose.q.toRotationMatrix();
    for (const auto& pt : cloud.points) {
      if (!(pt.belief >= 0.0 && pt.belief <= 1.0))
        throw std::invalid_argument("local map: belief must lie in [0,1]");
      const Vec3 world = sensor_pose.p + rot * pt.position;
      if (!world.allFinite()) continue;
      cells_.insert_or_assign(key_of(world), static_cast<float>(pt.belief));
    }
  }

  double query(const Vec3& world) const {
    const auto it = cells_.find(key_of(world));
    return it == cells_.end() ? 0.0 : static_cast<double>(it->second);
  }

  /// Drops every cell whose center lies farther than bound_radius from `center`.
  void prune(const Vec3& center) {
    const double r2 = cfg_.bound_radius * cfg_.bound_radius;
    std::erase_if(cells_, [&](const auto& kv) {
      return (center_of(kv.first) - center).squaredNorm() > r2;
    });
    last_prune_center_ = center;
  }

  const Vec3& last_prune_center() const { return last_prune_center_; }

  template <class Fn>
  void for_each_cell(Fn&& fn) const {
    for (const auto& [key, belief] : cells_) fn(key, static_cast<double>(belief));
  }

  /// Plain-text dump, one "x y z belief" line per cell, ordered by cell key.
  void dump(std::ostream& os) const {
    std::vector<std::pair<CellKey, float>> sorted(cells_.begin(), cells_.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    char line[128];
    for (const auto& [key, belief] : sorted) {
      const Vec3 c = center_of(key);
      std::snprintf(line, sizeof line, "%.6f %.6f %.6f %.6f\n", c.x(), c.y(), c.z(),
                    static_cast<double>(belief));
      os << line;
    }
  }

  void clear() { cells_.clear(); }

 private:
  LocalMapConfig cfg_;
  std::unordered_map<CellKey, float, CellKeyHash> cells_;
  Vec3 last_prune_center_ = Vec3::Zero();
};

}  // namespace tnav
