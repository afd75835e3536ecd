#pragma once

#include "tnav/errors.hpp"
#include "tnav/pose.hpp"
#include "tnav/tentacles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace tnav {

/// Online weights and thresholds of the trajectory evaluation.
struct HeuristicParams {
  double alpha_crash = 0.3;
  double tau_D_err = 0.0;
  double lambda_clear = 1.0;
  double lambda_clut = 1.0;
  double lambda_close = 2.0;
  double lambda_smo = 0.2;

  void validate() const {
    if (!(alpha_crash > 0.0 && alpha_crash <= 1.0))
      throw ConfigError("heuristics: alpha_crash must lie in (0,1]");
    if (!(tau_D_err >= 0.0)) throw ConfigError("heuristics: tau_D_err must be >= 0");
    for (double l : {lambda_clear, lambda_clut, lambda_close, lambda_smo})
      if (!(l >= 0.0) || !std::isfinite(l))
        throw ConfigError("heuristics: lambda weights must be finite and >= 0");
  }
};

enum class Navigability : int { NonNavigable = 0, Navigable = 1, Temporary = -1 };

/// Occupancy along one tentacle for the current cycle.
struct OccupancySummary {
  std::vector<std::uint32_t> counters;  // counters[k-1]: occupied priority voxels closest to point k
  std::optional<std::size_t> k_obs;     // first navigation point whose counter exceeds tau_D_err
  double length = 0.0;                  // l_t
  double l_obs = 0.0;
  double omega_tot = 0.0;
  double omega_obs = 0.0;
};

/// Aggregates the occupancy of one tentacle's classified voxels.
inline OccupancySummary occupancy_counters(const Tentacle& t, std::span<const VoxelRecord> records,
                                           std::span<const float> occupancy,
                                           const HeuristicParams& params) {
  OccupancySummary s;
  s.length = t.length;
  s.counters.assign(t.point_count(), 0);
  for (const VoxelRecord& r : records) {
    const double rho = occupancy[r.index];
    const double beta = r.weight;
    s.omega_tot += beta;
    s.omega_obs += beta * rho;
    if (r.priority() && rho > 0.0) ++s.counters[r.nav_point - 1];
  }
  for (std::size_t k = 1; k <= s.counters.size(); ++k) {
    if (static_cast<double>(s.counters[k - 1]) > params.tau_D_err) {
      s.k_obs = k;
      break;
    }
  }
  const std::size_t n = t.point_count();
  if (!s.k_obs || *s.k_obs == n)
    s.l_obs = t.length;
  else
    s.l_obs = t.length * static_cast<double>(*s.k_obs) / static_cast<double>(n);
  return s;
}

inline Navigability navigability(const OccupancySummary& s, double alpha_crash) {
  if (s.l_obs == s.length) return Navigability::Navigable;
  const double tau_crash = alpha_crash * s.length;
  if (s.l_obs < tau_crash) return Navigability::NonNavigable;
  return Navigability::Temporary;
}

inline double clearance(const OccupancySummary& s) { return 1.0 - s.l_obs / s.length; }

inline double clutter(const OccupancySummary& s) {
  return s.omega_tot > 0.0 ? s.omega_obs / s.omega_tot : 0.0;
}

inline double clutter(std::span<const VoxelRecord> records, std::span<const float> occupancy) {
  double tot = 0.0;
  double obs = 0.0;
  for (const VoxelRecord& r : records) {
    tot += r.weight;
    obs += static_cast<double>(r.weight) * occupancy[r.index];
  }
  return tot > 0.0 ? obs / tot : 0.0;
}

/// Point on the tentacle that is compared against the goal.
inline const Vec3& closeness_point(const Tentacle& t, const Vec3& goal_robot,
                                   const OccupancySummary& s) {
  const double goal_dist = goal_robot.norm();
  if (goal_dist > t.length) return t.point(s.k_obs.value_or(t.point_count()));
  const double arc = std::clamp(goal_dist, t.spacing, t.length);
  const auto n = static_cast<double>(t.point_count());
  // nearest by arc length, halfway ties to the lower point
  const double k = std::clamp(std::ceil(arc / t.spacing - 0.5), 1.0, n);
  return t.point(static_cast<std::size_t>(k));
}

/// Raw goal closeness of one tentacle, goal given in the robot frame.
inline double closeness(const Tentacle& t, const Vec3& goal_robot, const OccupancySummary& s) {
  return (closeness_point(t, goal_robot, s) - goal_robot).norm();
}

inline double closeness(const Tentacle& t, const Pose& robot, const Vec3& goal_world,
                        const OccupancySummary& s) {
  return (robot.transform(closeness_point(t, robot.inverse_transform(goal_world), s)) - goal_world)
      .norm();
}

/// Raw smoothness: distance between first navigation points. Zero without a previous choice.
inline double smoothness(const Tentacle& t, const Tentacle* previous) {
  if (previous == nullptr) return 0.0;
  return (t.nav_points.front() - previous->nav_points.front()).norm();
}

/// Divides by the maximum; a zero maximum leaves everything at zero.
inline void normalize_by_max(std::span<double> values) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, v);
  for (double& v : values) v = peak > 0.0 ? v / peak : 0.0;
}

struct TentacleEvaluation {
  Navigability nav = Navigability::Navigable;
  double clear = 0.0;
  double clut = 0.0;
  double close = 0.0;
  double smo = 0.0;
  double cost = 0.0;
};

inline double total_cost(const TentacleEvaluation& e, const HeuristicParams& p) {
  return p.lambda_clear * e.clear + p.lambda_clut * e.clut + p.lambda_close * e.close +
         p.lambda_smo * e.smo;
}

/// Lowest-cost tentacle that is navigable or temporarily navigable; ties go to
/// the lowest index. Empty when nothing is navigable.
inline std::optional<std::size_t> select_best(std::span<const TentacleEvaluation> evals) {
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < evals.size(); ++j) {
    if (evals[j].nav == Navigability::NonNavigable) continue;
    if (!best || evals[j].cost < evals[*best].cost) best = j;
  }
  return best;
}

struct CycleEvaluation {
  std::vector<OccupancySummary> summaries;
  std::vector<TentacleEvaluation> evals;
};

/// Evaluates every tentacle against the current grid occupancy: counters,
/// the five heuristics, normalization over the fan and the weighted cost.
inline CycleEvaluation evaluate_tentacles(const TentacleSet& tentacles,
                                          const ClassifiedVoxels& voxels,
                                          std::span<const float> occupancy,
                                          const Vec3& goal_robot,
                                          std::optional<std::size_t> previous_best,
                                          const HeuristicParams& params) {
  const std::size_t n = tentacles.size();
  CycleEvaluation out;
  out.summaries.reserve(n);
  out.evals.resize(n);
  std::vector<double> close(n);
  std::vector<double> smo(n);
  const Tentacle* prev = previous_best && *previous_best < n ? &tentacles[*previous_best] : nullptr;
  for (std::size_t j = 0; j < n; ++j) {
    const Tentacle& t = tentacles[j];
    out.summaries.push_back(occupancy_counters(t, voxels[j], occupancy, params));
    const OccupancySummary& s = out.summaries.back();
    TentacleEvaluation& e = out.evals[j];
    e.nav = navigability(s, params.alpha_crash);
    e.clear = clearance(s);
    e.clut = clutter(s);
    close[j] = closeness(t, goal_robot, s);
    smo[j] = smoothness(t, prev);
  }
  normalize_by_max(close);
  normalize_by_max(smo);
  for (std::size_t j = 0; j < n; ++j) {
    out.evals[j].close = close[j];
    out.evals[j].smo = smo[j];
    out.evals[j].cost = total_cost(out.evals[j], params);
  }
  return out;
}

/// Debug dump, one "cycle j pi_nav pi_clear pi_clut pi_close pi_smo F" line per tentacle.
inline void dump_evaluations(std::ostream& os, std::size_t cycle,
                             std::span<const TentacleEvaluation> evals) {
  char line[160];
  for (std::size_t j = 0; j < evals.size(); ++j) {
    const auto& e = evals[j];
    std::snprintf(line, sizeof line, "%zu %zu %d %.6f %.6f %.6f %.6f %.6f\n", cycle, j,
                  static_cast<int>(e.nav), e.clear, e.clut, e.close, e.smo, e.cost);
    os << line;
  }
}

}  // namespace tnav
