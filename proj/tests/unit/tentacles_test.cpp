#include "tnav/tentacles.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

using namespace tnav;

TEST(SampleTentacles, SingleTentacleAlongX) {
  TentacleConfig c;
  c.n_phi = c.n_theta = 1;
  const auto ts = sample_tentacles(c);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_TRUE(ts[0].direction.isApprox(Vec3::UnitX()));
  EXPECT_TRUE(ts[0].nav_points.back().isApprox(Vec3(10, 0, 0)));
}

TEST(SampleTentacles, YawSamplesIncludeEndpoints) {
  TentacleConfig c;
  c.n_phi = 3;
  c.n_theta = 1;
  c.phi_cov = deg2rad(60.0);
  const auto ts = sample_tentacles(c);
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_NEAR(ts[0].yaw, deg2rad(-30.0), 1e-12);
  EXPECT_NEAR(ts[1].yaw, 0.0, 1e-12);
  EXPECT_NEAR(ts[2].yaw, deg2rad(30.0), 1e-12);
}

TEST(SampleTentacles, IndexOrderAndPitchSign) {
  TentacleConfig c;
  c.n_phi = 4;
  c.n_theta = 3;
  const auto ts = sample_tentacles(c);
  ASSERT_EQ(ts.size(), 12u);
  for (int it = 0; it < 3; ++it)
    for (int ip = 0; ip < 4; ++ip) {
      const auto& t = ts[it * 4 + ip];
      EXPECT_NEAR(t.yaw, -c.phi_cov / 2 + c.phi_cov * ip / 3, 1e-12);
      EXPECT_NEAR(t.pitch, -c.theta_cov / 2 + c.theta_cov * it / 2, 1e-12);
      EXPECT_NEAR(t.direction.norm(), 1.0, 1e-12);
      EXPECT_EQ(t.direction.z() > 0, t.pitch > 0);
    }
}

TEST(MakeTentacle, NavigationPointSpacing) {
  const auto t = make_tentacle(0.0, 0.0, 10.0, 0.5);
  ASSERT_EQ(t.point_count(), 20u);
  for (std::size_t k = 1; k <= 20; ++k) EXPECT_NEAR(t.point(k).x(), 0.5 * k, 1e-12);

  const auto u = make_tentacle(0.0, 0.0, 10.0, 0.35);  // 28.57 -> 29 points
  ASSERT_EQ(u.point_count(), 29u);
  EXPECT_NEAR(u.spacing, 10.0 / 29, 1e-15);
  EXPECT_DOUBLE_EQ(u.nav_points.back().x(), 10.0);
  EXPECT_THROW(make_tentacle(0, 0, 0.0, 0.35), ConfigError);
}

TEST(SampleTentacles, RangeFunctionShortensTentacles) {
  TentacleConfig c;
  c.n_phi = 3;
  c.n_theta = 3;
  c.phi_cov = deg2rad(90.0);
  c.theta_cov = deg2rad(90.0);
  const auto ts = sample_tentacles(c, ellipsoid_range(10.0, 10.0, 5.0));
  EXPECT_NEAR(ts[4].length, 10.0, 1e-12);  // straight ahead
  // 45 deg up: 1/sqrt(0.5/100 + 0.5/25)
  EXPECT_NEAR(ts[7].length, 1.0 / std::sqrt(0.005 + 0.02), 1e-12);
  EXPECT_NEAR(constant_range(3.0)(Vec3::UnitY()), 3.0, 0.0);
}

TEST(TentacleConfig, Validation) {
  TentacleConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tau_S = 0.3;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.n_phi = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.alpha_beta = 1.0;  // support weight would exceed beta_max
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(OccupancyWeight, Examples) {
  TentacleConfig c;
  EXPECT_EQ(occupancy_weight(VoxelClass::Priority, 0.1, c), 1.0);
  EXPECT_EQ(occupancy_weight(VoxelClass::Priority, 0.35, c), 1.0);
  EXPECT_DOUBLE_EQ(occupancy_weight(VoxelClass::Support, 0.4, c), 0.25);
  EXPECT_DOUBLE_EQ(occupancy_weight(VoxelClass::Support, 0.5, c), 0.2);
  EXPECT_THROW(occupancy_weight(VoxelClass::Support, 0.35, c), std::logic_error);
}

TEST(ClassifyTentacle, ThresholdExamples) {
  // straight tentacle on x; probe voxels placed at known distances off its first point
  TentacleConfig c;
  c.n_phi = c.n_theta = 1;
  c.l_t_max = 2.0;
  c.delta_d = 1.0;
  const GridConfig g{0.05, 120, 40, 40};
  const auto t = make_tentacle(0.0, 0.0, 2.0, 1.0);
  const auto recs = classify_tentacle(t, c, g);
  auto find = [&](const Vec3& p) -> const VoxelRecord* {
    const auto o = linear_index(p, g);
    for (const auto& r : recs)
      if (o && r.index == *o) return &r;
    return nullptr;
  };
  // voxel centers are at odd multiples of 0.025
  const VoxelRecord* a = find({1.025, 0.275, 0.025});  // d = 0.2765
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->cls, VoxelClass::Priority);
  EXPECT_EQ(a->weight, 1.0f);
  EXPECT_EQ(a->nav_point, 1);
  const VoxelRecord* b = find({1.025, 0.425, 0.025});  // d ~ 0.4265
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->cls, VoxelClass::Support);
  const Vec3 bc(1.025, 0.425, 0.025);
  EXPECT_FLOAT_EQ(b->weight, static_cast<float>(1.0 / (10.0 * (bc - Vec3(1, 0, 0)).norm())));
  EXPECT_EQ(find({1.025, 0.575, 0.025}), nullptr);  // d ~ 0.576
}

TEST(ClassifyTentacle, MatchesBruteForceOracle) {
  TentacleConfig c;
  c.n_phi = 4;
  c.n_theta = 3;
  c.l_t_max = 2.2;
  c.delta_d = 0.3;
  c.tau_P = 0.2;
  c.tau_S = 0.45;
  c.alpha_beta = 6.0;
  const GridConfig g{0.2, 24, 20, 16};
  const auto ts = sample_tentacles(c, ellipsoid_range(2.0, 2.0, 1.2));
  const auto vox = extract_support_priority(ts, c, g);
  ASSERT_EQ(vox.tentacle_count(), ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const auto want = oracle::classify(ts[j], c, g);
    const auto& got = vox[j];
    ASSERT_EQ(got.size(), want.size()) << "tentacle " << j;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(got[i].index, want[i].index);
      EXPECT_EQ(got[i].nav_point, want[i].m);
      EXPECT_EQ(got[i].priority(), want[i].priority);
      EXPECT_EQ(got[i].weight, want[i].beta);
    }
  }
}

TEST(ClassifyTentacle, Properties) {
  const TentacleConfig c;  // paper parameter set
  const GridConfig g{0.2, 40, 40, 40};
  TentacleConfig small = c;
  small.n_phi = 5;
  small.n_theta = 3;
  small.l_t_max = 3.5;
  const auto ts = sample_tentacles(small);
  const auto vox = extract_support_priority(ts, small, g);
  for (std::size_t j = 0; j < ts.size(); ++j) {
    std::set<VoxelIndex> prio, supp;
    std::vector<std::pair<double, float>> support_by_distance;
    for (const auto& r : vox[j]) {
      ASSERT_LT(r.index, g.voxel_count());
      (r.priority() ? prio : supp).insert(r.index);
      const Vec3 v = voxel_center(r.index, g);
      double dmin = 1e9;
      for (const auto& p : ts[j].nav_points) dmin = std::min(dmin, (v - p).norm());
      ASSERT_DOUBLE_EQ((v - ts[j].point(r.nav_point)).norm(), dmin);
      if (!r.priority()) support_by_distance.emplace_back(dmin, r.weight);
    }
    for (VoxelIndex o : prio) ASSERT_FALSE(supp.count(o));
    EXPECT_EQ(prio.size() + supp.size(), vox[j].size());
    EXPECT_LT(vox[j].size(), g.voxel_count() / 10);
    std::sort(support_by_distance.begin(), support_by_distance.end());
    for (std::size_t i = 1; i < support_by_distance.size(); ++i)
      ASSERT_LE(support_by_distance[i].second, support_by_distance[i - 1].second);
  }
  EXPECT_LE(vox.record_count(), ts.size() * g.voxel_count());
}

TEST(ClosestNavPoint, TiesGoToLowerIndex) {
  const auto t = make_tentacle(0.0, 0.0, 4.0, 1.0);
  EXPECT_EQ(closest_nav_point(t, {1.5, 0.3, 0.0}).k, 1u);
  EXPECT_EQ(closest_nav_point(t, {2.5, 0.0, 0.0}).k, 2u);
  EXPECT_EQ(closest_nav_point(t, {-3.0, 0.0, 0.0}).k, 1u);
  EXPECT_EQ(closest_nav_point(t, {9.0, 1.0, 0.0}).k, 4u);
  EXPECT_DOUBLE_EQ(closest_nav_point(t, {9.0, 0.0, 0.0}).distance, 5.0);
}

TEST(ClassifiedVoxels, ReferencedUnionAndDump) {
  ClassifiedVoxels v;
  v.per_tentacle = {{{5, 1.0f, 1, VoxelClass::Priority}, {2, 0.25f, 2, VoxelClass::Support}},
                    {{5, 1.0f, 3, VoxelClass::Priority}}};
  EXPECT_EQ(v.record_count(), 3u);
  EXPECT_EQ(v.referenced_voxels(), (std::vector<VoxelIndex>{2, 5}));
  std::ostringstream os;
  v.dump(os);
  EXPECT_EQ(os.str(), "0 5 1.000000 1 1\n0 2 0.250000 2 0\n1 5 1.000000 3 1\n");
}
