#include "tnav/local_map.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace tnav;

TEST(OccupancyMap, EmptyCloudLeavesMapUnchanged) {
  OccupancyMap map;
  map.insert_cloud({}, Pose{});
  EXPECT_TRUE(map.empty());
}

TEST(OccupancyMap, IdentityInsertAndQuery) {
  OccupancyMap map;
  PointCloud c;
  c.add({1.0, 0.0, 0.0});
  map.insert_cloud(c, Pose{});
  EXPECT_EQ(map.query({1.0, 0.0, 0.0}), 1.0);
  EXPECT_EQ(map.query({5.0, 5.0, 5.0}), 0.0);
}

TEST(OccupancyMap, LatestWriteWins) {
  OccupancyMap map;
  PointCloud a, b;
  a.add({1.0, 0.0, 0.0}, 1.0);
  b.add({1.0, 0.0, 0.0}, 0.3);
  map.insert_cloud(a, Pose{});
  map.insert_cloud(b, Pose{});
  EXPECT_FLOAT_EQ(map.query({1.0, 0.0, 0.0}), 0.3);
}

TEST(OccupancyMap, QueryInsideCellAndQuantization) {
  OccupancyMap map({0.5, 20.0});
  PointCloud c;
  c.add({0.1, 0.1, 0.1}, 0.8);
  map.insert_cloud(c, Pose{});
  EXPECT_FLOAT_EQ(map.query({0.1, 0.1, 0.1}), 0.8);
  EXPECT_EQ(map.query({0.4, 0.2, 0.01}), map.query({0.1, 0.1, 0.1}));
  EXPECT_EQ(map.query({0.5, 0.1, 0.1}), 0.0);
}

TEST(OccupancyMap, SensorPoseTransformsPoints) {
  OccupancyMap map({0.1, 50.0});
  Pose s;
  s.p = {2.0, 1.0, 0.5};
  s.q = yaw_rotation(kPi / 2);
  PointCloud c;
  c.add({1.0, 0.0, 0.0});
  map.insert_cloud(c, s);
  EXPECT_EQ(map.query({2.0, 2.0, 0.5}), 1.0);
}

TEST(OccupancyMap, RejectsBadBeliefs) {
  PointCloud c;
  EXPECT_THROW(c.add({0, 0, 0}, 1.5), std::invalid_argument);
  EXPECT_THROW(c.add({0, 0, 0}, -0.1), std::invalid_argument);
  c.points.push_back({Vec3::Zero(), 2.0});
  OccupancyMap map;
  EXPECT_THROW(map.insert_cloud(c, Pose{}), std::invalid_argument);
}

TEST(OccupancyMap, PruneByDistance) {
  OccupancyMap map({0.2, 5.0});
  PointCloud c;
  c.add({1.0, 1.0, 0.0});
  c.add({6.1, 0.0, 0.0});
  map.insert_cloud(c, Pose{});
  EXPECT_EQ(map.size(), 2u);
  map.prune(Vec3::Zero());
  EXPECT_EQ(map.size(), 1u);
  EXPECT_EQ(map.query({6.1, 0.0, 0.0}), 0.0);
  EXPECT_EQ(map.query({1.0, 1.0, 0.0}), 1.0);
  map.prune(Vec3::Zero());
  EXPECT_EQ(map.size(), 1u);

  OccupancyMap empty;
  empty.prune(Vec3::Zero());
  EXPECT_TRUE(empty.empty());
}

TEST(OccupancyMap, PropertiesOnRandomClouds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-12.0, 12.0), b(0.0, 1.0);
  const LocalMapConfig cfg{0.3, 4.0};
  for (int trial = 0; trial < 20; ++trial) {
    PointCloud cloud;
    for (int i = 0; i < 2000; ++i) cloud.add({u(rng), u(rng), u(rng)}, b(rng));
    Pose s;
    s.p = {u(rng), u(rng), u(rng)};
    s.q = yaw_rotation(u(rng));

    OccupancyMap once(cfg), twice(cfg);
    once.insert_cloud(cloud, s);
    twice.insert_cloud(cloud, s);
    twice.insert_cloud(cloud, s);
    std::ostringstream a, b2;
    once.dump(a);
    twice.dump(b2);
    ASSERT_EQ(a.str(), b2.str());

    // last write of each point wins at its own position
    for (std::size_t i = cloud.points.size(); i-- > cloud.points.size() - 50;) {
      const Vec3 w = s.transform(cloud.points[i].position);
      bool overwritten = false;
      for (std::size_t j = i + 1; j < cloud.points.size(); ++j)
        overwritten |= once.key_of(s.transform(cloud.points[j].position)) == once.key_of(w);
      if (!overwritten) {
        ASSERT_FLOAT_EQ(once.query(w), cloud.points[i].belief);
      }
    }

    once.prune(s.p);
    const double bound = std::pow(2.0 * cfg.bound_radius / cfg.resolution + 1.0, 3);
    ASSERT_LE(static_cast<double>(once.size()), bound);
    once.for_each_cell([&](const CellKey& k, double) {
      ASSERT_LE((once.center_of(k) - s.p).norm(), cfg.bound_radius);
    });
  }
}

TEST(OccupancyMap, DumpIsSortedFixedPoint) {
  OccupancyMap map({1.0, 50.0});
  PointCloud c;
  c.add({2.5, 0.5, 0.5}, 0.5);
  c.add({0.5, 0.5, 0.5}, 1.0);
  map.insert_cloud(c, Pose{});
  std::ostringstream os;
  map.dump(os);
  EXPECT_EQ(os.str(), "0.500000 0.500000 0.500000 1.000000\n2.500000 0.500000 0.500000 0.500000\n");
}
