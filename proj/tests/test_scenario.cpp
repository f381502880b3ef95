#include <gtest/gtest.h>

#include <cmath>

#include "ilc/scenario.hpp"

using namespace ilc;

TEST(StepMotion, ZeroDynamicsStaysPut) {
  Rng rng(1);
  const NodeState s{{0, 0, 0}, {0, 0, 0}, 0};
  const NodeState n = step_motion(s, {0, 0, 0}, 66.7e-6, rng);
  EXPECT_EQ(n.position, (Vec3{0, 0, 0}));
  EXPECT_EQ(n.time_index, 1u);
}

TEST(StepMotion, ConstantVelocityAdvance) {
  Rng rng(1);
  const NodeState n = step_motion({{0, 0, 0}, {10, 0, 0}, 0}, {0, 0, 0}, 66.7e-6, rng);
  EXPECT_NEAR(n.position.x, 6.67e-4, 1e-15);
  EXPECT_EQ(n.position.y, 0.0);
  EXPECT_EQ(n.position.z, 0.0);
}

TEST(StepMotion, IncrementVarianceMatchesSigma) {
  Rng rng(42);
  const MotionNoise noise{0.005, 0.005, 0.005};
  NodeState s{{0, 0, 0}, {0, 0, 0}, 0};
  constexpr int kSteps = 1'000'000;
  double sum[3]{}, sq[3]{};
  for (int i = 0; i < kSteps; ++i) {
    const NodeState n = step_motion(s, noise, 66.7e-6, rng);
    const Vec3 d = n.position - s.position;
    for (int a = 0; a < 3; ++a) {
      sum[a] += d[a];
      sq[a] += d[a] * d[a];
    }
    s = n;
  }
  for (int a = 0; a < 3; ++a) {
    const double mean = sum[a] / kSteps;
    const double var = sq[a] / kSteps - mean * mean;
    EXPECT_NEAR(var, 2.5e-5, 0.01 * 2.5e-5) << "axis " << a;
  }
}

TEST(StepMotion, SameSeedSameTrajectory) {
  Rng a(9), b(9);
  NodeState x{{1, 2, 3}, {4, 5, 6}, 0}, y = x;
  for (int i = 0; i < 100; ++i) {
    x = step_motion(x, {}, 1e-3, a);
    y = step_motion(y, {}, 1e-3, b);
  }
  EXPECT_EQ(x.position, y.position);
}

TEST(StepMotion, RejectsBadInputs) {
  Rng rng(1);
  EXPECT_THROW(step_motion({{0, 0, 0}, {NAN, 0, 0}, 0}, {}, 1e-3, rng), InvalidInput);
  EXPECT_THROW(step_motion({{0, 0, 0}, {0, 0, 0}, 0}, {-1, 0, 0}, 1e-3, rng), InvalidInput);
  EXPECT_THROW(step_motion({{0, 0, 0}, {0, 0, 0}, 0}, {}, 0.0, rng), InvalidInput);
}

TEST(Advance, IsTheNoiseFreeMean) {
  const NodeState n = advance({{400, 100, 100}, {50, 0, 0}, 0}, 1000, 66.7e-6);
  EXPECT_NEAR(n.position.x, 400 + 50 * 1000 * 66.7e-6, 1e-12);
  EXPECT_EQ(n.time_index, 1000u);
}

TEST(LinkGeometry, DiagonalExample) {
  const auto g = link_geometry({{100, 0, 100}, {}, 0}, {{0, 0, 0}, {}, 0});
  EXPECT_NEAR(g.d, 141.4214, 1e-4);
  EXPECT_NEAR(g.theta, kPi / 4, 1e-12);
  EXPECT_NEAR(g.phi, 0.0, 1e-12);
  EXPECT_FALSE(g.degenerate);
}

TEST(LinkGeometry, AzimuthQuarterTurn) {
  const auto g = link_geometry({{0, 50, 50}, {}, 0}, {{0, 0, 0}, {}, 0});
  EXPECT_NEAR(g.phi, kPi / 2, 1e-12);
  EXPECT_NEAR(g.theta, kPi / 4, 1e-12);
}

TEST(LinkGeometry, OverheadIsFlagged) {
  const auto g = link_geometry({{0, 0, 30}, {}, 0}, {{0, 0, 0}, {}, 0});
  EXPECT_TRUE(g.degenerate);
  EXPECT_NEAR(g.theta, kPi / 2, 1e-12);
  EXPECT_EQ(g.phi, 0.0);
}

TEST(LinkGeometry, CoincidentPositionsThrow) {
  EXPECT_THROW(link_geometry({{1, 2, 3}, {}, 0}, {{1, 2, 3}, {}, 0}), DegenerateGeometry);
}

TEST(LinkGeometry, RoundTripsThroughDisplacement) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-500, 500), z(1, 100);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a{u(rng), u(rng), z(rng)}, b{u(rng), u(rng), 0.0};
    const auto g = link_geometry({a, {}, 0}, {b, {}, 0});
    const Vec3 back = displacement(g);
    EXPECT_NEAR((back - (a - b)).norm(), 0.0, 1e-9 * g.d);
    EXPECT_NEAR(g.d * g.d, g.d_h * g.d_h + g.d_z * g.d_z, 1e-9 * g.d * g.d);
  }
}

TEST(Doppler, Examples) {
  EXPECT_EQ(doppler_shift(0.0, 4.9e9), 0.0);
  EXPECT_NEAR(doppler_shift(50.0, 4.9e9), 817.2, 0.05);
  EXPECT_NEAR(doppler_shift(10.0, 4.9e9), 163.4, 0.05);
  EXPECT_THROW(doppler_shift(-1.0, 4.9e9), InvalidInput);
}
