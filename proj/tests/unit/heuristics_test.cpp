#include "tnav/heuristics.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace tnav;

namespace {

// Straight tentacle along x with n_s = 10 over 10 m.
Tentacle ten_meter() { return make_tentacle(0.0, 0.0, 10.0, 1.0); }

OccupancySummary summary_with_lobs(double l_obs, double l_t = 10.0) {
  OccupancySummary s;
  s.length = l_t;
  s.l_obs = l_obs;
  return s;
}

}  // namespace

TEST(OccupancyCounters, NoOccupancy) {
  const auto t = ten_meter();
  const std::vector<VoxelRecord> recs{{0, 1.0f, 2, VoxelClass::Priority}};
  const std::vector<float> occ{0.0f};
  const auto s = occupancy_counters(t, recs, occ, {});
  EXPECT_FALSE(s.k_obs);
  EXPECT_EQ(s.l_obs, 10.0);
}

TEST(OccupancyCounters, FirstOccupiedPoint) {
  const auto t = ten_meter();
  const std::vector<VoxelRecord> recs{{0, 1.0f, 2, VoxelClass::Priority},
                                      {1, 0.25f, 1, VoxelClass::Support},
                                      {2, 1.0f, 5, VoxelClass::Priority}};
  const std::vector<float> occ{1.0f, 1.0f, 1.0f};
  HeuristicParams p;
  p.tau_D_err = 0;
  const auto s = occupancy_counters(t, recs, occ, p);
  ASSERT_TRUE(s.k_obs);
  EXPECT_EQ(*s.k_obs, 2u);
  EXPECT_DOUBLE_EQ(s.l_obs, 2.0);
  EXPECT_EQ(s.counters[0], 0u);  // support voxels never count
  EXPECT_DOUBLE_EQ(s.omega_tot, 2.25);
  EXPECT_DOUBLE_EQ(s.omega_obs, 2.25);

  p.tau_D_err = 1;
  EXPECT_FALSE(occupancy_counters(t, recs, occ, p).k_obs);
}

TEST(OccupancyCounters, ObstacleAtLastPointKeepsFullLength) {
  const auto t = ten_meter();
  const std::vector<VoxelRecord> recs{{0, 1.0f, 10, VoxelClass::Priority}};
  const std::vector<float> occ{0.5f};
  const auto s = occupancy_counters(t, recs, occ, {});
  EXPECT_EQ(s.k_obs, 10u);
  EXPECT_EQ(s.l_obs, 10.0);
  EXPECT_EQ(navigability(s, 0.3), Navigability::Navigable);
}

TEST(Navigability, Examples) {
  EXPECT_EQ(navigability(summary_with_lobs(10.0), 0.3), Navigability::Navigable);
  EXPECT_EQ(navigability(summary_with_lobs(2.0), 0.3), Navigability::NonNavigable);
  EXPECT_EQ(navigability(summary_with_lobs(8.0), 0.3), Navigability::Temporary);
  EXPECT_EQ(navigability(summary_with_lobs(3.0), 0.3), Navigability::Temporary);
}

TEST(Clearance, Examples) {
  EXPECT_EQ(clearance(summary_with_lobs(10.0)), 0.0);
  EXPECT_EQ(clearance(summary_with_lobs(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(clearance(summary_with_lobs(2.0)), 0.8);
}

TEST(Clutter, Examples) {
  const std::vector<VoxelRecord> two{{0, 1.0f, 1, VoxelClass::Priority}, {1, 0.25f, 1, VoxelClass::Support}};
  EXPECT_EQ(clutter(two, std::vector<float>{0.0f, 0.0f}), 0.0);
  EXPECT_EQ(clutter(two, std::vector<float>{1.0f, 1.0f}), 1.0);
  EXPECT_DOUBLE_EQ(clutter(two, std::vector<float>{1.0f, 0.0f}), 0.8);
  EXPECT_EQ(clutter(std::vector<VoxelRecord>{}, std::vector<float>{}), 0.0);
}

TEST(Closeness, GoalBeyondTentacle) {
  // tentacle of 5 m toward a goal at 10 m: compare the last point
  const auto t = make_tentacle(0.0, 0.0, 5.0, 1.0);
  OccupancySummary s;
  EXPECT_DOUBLE_EQ(closeness(t, Vec3(10, 0, 0), s), 5.0);
  s.k_obs = 2;
  EXPECT_DOUBLE_EQ(closeness(t, Vec3(10, 0, 0), s), 8.0);

  Pose robot;
  robot.p = {1, 1, 0};
  robot.q = yaw_rotation(kPi / 2);
  s.k_obs.reset();
  EXPECT_NEAR(closeness(t, robot, Vec3(1, 11, 0), s), 5.0, 1e-12);
}

TEST(Closeness, GoalWithinTentacleUsesNearestPoint) {
  const auto t = make_tentacle(0.0, 0.0, 10.0, 0.5);
  OccupancySummary s;
  EXPECT_NEAR(closeness(t, Vec3(3.2, 0, 0), s), 0.2, 1e-12);
  EXPECT_NEAR(closeness(t, Vec3(3.25, 0, 0), s), 0.25, 1e-12);  // tie: lower point at 3.0
  EXPECT_NEAR(closeness(t, Vec3(0.1, 0, 0), s), 0.4, 1e-12);    // clamped to the first point
}

TEST(Closeness, PointingTentacleIsMinimal) {
  TentacleConfig c;
  c.n_phi = 13;
  c.n_theta = 5;
  const auto ts = sample_tentacles(c);
  const auto& aim = ts[2 * 13 + 9];
  const Vec3 goal = 6.3 * aim.direction;
  OccupancySummary s;
  const double best = closeness(aim, goal, s);
  EXPECT_LE(best, c.delta_d / 2 + 1e-12);
  for (std::size_t j = 0; j < ts.size(); ++j)
    if (&ts[j] != &aim) {
      EXPECT_GT(closeness(ts[j], goal, s), best);
    }
}

TEST(Smoothness, Examples) {
  const auto a = make_tentacle(0.0, 0.0, 10.0, 0.5);
  const auto b = make_tentacle(deg2rad(30.0), 0.0, 10.0, 0.5);
  EXPECT_EQ(smoothness(a, &a), 0.0);
  EXPECT_EQ(smoothness(a, nullptr), 0.0);
  EXPECT_NEAR(smoothness(a, &b), 2 * 0.5 * std::sin(deg2rad(15.0)), 1e-12);
  EXPECT_NEAR(smoothness(a, &b), 0.2588, 1e-4);
}

TEST(NormalizeByMax, Identity) {
  std::vector<double> v{2.0, 4.0, 1.0};
  normalize_by_max(v);
  EXPECT_EQ(v, (std::vector<double>{0.5, 1.0, 0.25}));
  std::vector<double> z{0.0, 0.0};
  normalize_by_max(z);
  EXPECT_EQ(z, (std::vector<double>{0.0, 0.0}));
}

TEST(TotalCost, Examples) {
  TentacleEvaluation e{Navigability::Navigable, 0.8, 0.8, 1.0, 0.0, 0.0};
  EXPECT_EQ(total_cost(e, {0.3, 0, 0, 0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(total_cost(e, {0.3, 0, 1, 1, 1, 1}), 2.6);
}

TEST(SelectBest, Examples) {
  std::vector<TentacleEvaluation> one{{Navigability::Navigable}};
  EXPECT_EQ(select_best(one), 0u);
  std::vector<TentacleEvaluation> two(2);
  two[0].cost = 0.4;
  two[1].cost = 0.2;
  EXPECT_EQ(select_best(two), 1u);
  two[1].nav = Navigability::Temporary;
  EXPECT_EQ(select_best(two), 1u);
  two[1].nav = Navigability::NonNavigable;
  EXPECT_EQ(select_best(two), 0u);
  two[0].nav = Navigability::NonNavigable;
  EXPECT_FALSE(select_best(two));
  std::vector<TentacleEvaluation> tie(3);
  tie[1].cost = tie[2].cost = -1.0;
  EXPECT_EQ(select_best(tie), 1u);
}

TEST(HeuristicParams, Validation) {
  HeuristicParams p;
  EXPECT_NO_THROW(p.validate());
  p.alpha_crash = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.lambda_smo = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(EvaluateTentacles, AgreesWithOracleOnRandomScenes) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridConfig g{0.25, 24, 24, 12};
  for (int trial = 0; trial < 150; ++trial) {
    TentacleConfig c;
    c.n_phi = 1 + static_cast<int>(u(rng) * 7);
    c.n_theta = 1 + static_cast<int>(u(rng) * 4);
    c.l_t_max = 1.0 + 1.8 * u(rng);
    c.delta_d = 0.2 + 0.3 * u(rng);
    const auto ts = sample_tentacles(c);
    const auto vox = extract_support_priority(ts, c, g);
    std::vector<float> occ(g.voxel_count());
    const double fill = u(rng) * 0.2;
    for (auto& r : occ) r = u(rng) < fill ? static_cast<float>(u(rng)) : 0.0f;
    HeuristicParams p{0.05 + 0.9 * u(rng), std::floor(3 * u(rng)), u(rng), u(rng), 2 * u(rng), u(rng)};
    const Vec3 goal(6 * u(rng) - 1, 6 * u(rng) - 3, 2 * u(rng) - 1);
    std::optional<std::size_t> prev;
    if (u(rng) < 0.7) prev = static_cast<std::size_t>(u(rng) * ts.size());

    const auto got = evaluate_tentacles(ts, vox, occ, goal, prev, p);
    const auto want = oracle::evaluate(ts, vox, occ, goal, prev, p);
    for (std::size_t j = 0; j < ts.size(); ++j) {
      ASSERT_EQ(static_cast<int>(got.evals[j].nav), want.rows[j].nav);
      ASSERT_NEAR(got.evals[j].clear, want.rows[j].clear, 1e-12);
      ASSERT_NEAR(got.evals[j].clut, want.rows[j].clut, 1e-9);
      ASSERT_NEAR(got.evals[j].close, want.rows[j].close, 1e-12);
      ASSERT_NEAR(got.evals[j].smo, want.rows[j].smo, 1e-12);
    }
    ASSERT_EQ(select_best(got.evals), want.best) << "trial " << trial;
  }
}

TEST(DumpEvaluations, Format) {
  std::vector<TentacleEvaluation> e{{Navigability::Temporary, 0.5, 0.25, 1.0, 0.0, 1.75}};
  std::ostringstream os;
  dump_evaluations(os, 3, e);
  EXPECT_EQ(os.str(), "3 0 -1 0.500000 0.250000 1.000000 0.000000 1.750000\n");
}
