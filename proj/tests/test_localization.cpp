#include <gtest/gtest.h>

#include <cmath>

#include "ilc/localization.hpp"
#include "ilc/oracles.hpp"

using namespace ilc;

TEST(DirectionVectors, AxisAlignedSubstitution) {
  LinkGeometry g;
  g.d = 1;
  g.d_h = 1;
  g.theta = 0;
  g.phi = 0;
  const auto q = direction_vectors(g);
  // Derivatives with respect to the GN position: the vectors of the
  // axis-aligned example up to an overall sign.
  EXPECT_NEAR((q.q_r + Vec3{1, 0, 0}).norm(), 0.0, 1e-15);
  EXPECT_NEAR((q.q_theta + Vec3{0, 0, 1}).norm(), 0.0, 1e-15);
  EXPECT_NEAR((q.q_phi + Vec3{0, 1, 0}).norm(), 0.0, 1e-15);
}

TEST(DirectionVectors, MatchFiniteDifferences) {
  Rng rng(17);
  std::uniform_real_distribution<double> x(0, 1000), y(0, 200), z(20, 100);
  for (int i = 0; i < 200; ++i) {
    const Vec3 uav{x(rng), y(rng), z(rng)}, gn{x(rng), y(rng), 0.0};
    const auto g = link_geometry({uav, {}, 0}, {gn, {}, 0});
    const auto q = direction_vectors(g);
    const auto fd = oracle::finite_difference_directions(uav, gn, 1e-5 * std::min(g.d_h, g.d_z) / g.d);
    EXPECT_LT((q.q_r - fd.q_r).norm() / q.q_r.norm(), 1e-6);
    EXPECT_LT((q.q_theta - fd.q_theta).norm() / q.q_theta.norm(), 1e-6);
    EXPECT_LT((q.q_phi - fd.q_phi).norm() / q.q_phi.norm(), 1e-6);
  }
}

TEST(DirectionVectors, OverheadThrows) {
  const auto g = link_geometry({{0, 0, 50}, {}, 0}, {{0, 0, 0}, {}, 0});
  EXPECT_THROW(direction_vectors(g), DegenerateGeometry);
}

TEST(RangingIntensities, ZeroSnrIsZero) {
  const auto li = ranging_intensities(0.0, RadioParams{});
  EXPECT_EQ(li.lambda_r, 0.0);
  EXPECT_EQ(li.lambda_theta, 0.0);
  EXPECT_EQ(li.lambda_phi, 0.0);
}

TEST(RangingIntensities, RangeExample) {
  const auto li = ranging_intensities(1.0, RadioParams{});
  EXPECT_NEAR(li.lambda_r, 5.974e-4, 1e-6);
}

TEST(PilotFim, ZeroIntensitiesGiveZero) {
  const auto g = link_geometry({{100, 0, 100}, {}, 0}, {{0, 0, 0}, {}, 0});
  EXPECT_EQ(pilot_fim(g, {}), Fim3{});
}

TEST(PilotFim, RankOneRangeTerm) {
  LinkGeometry g;
  g.d = g.d_h = 1;
  const Fim3 J = pilot_fim(g, {1.0, 0.0, 0.0});
  EXPECT_NEAR(J(0, 0), 1.0, 1e-15);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i || j) {
        EXPECT_NEAR(J(i, j), 0.0, 1e-15);
      }
}

TEST(PilotFim, AlwaysPsd) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-300, 300), z(1, 100), s(0, 5);
  for (int i = 0; i < 500; ++i) {
    const auto g = link_geometry({{u(rng), u(rng), z(rng)}, {}, 0}, {{0, 0, 0}, {}, 0});
    const Fim3 J = pilot_fim(g, ranging_intensities(std::pow(10.0, s(rng)), RadioParams{}));
    const auto ev = J.eigenvalues();
    EXPECT_GE(ev[0], -1e-10 * ev[2]);
    EXPECT_EQ(J.asymmetry(), 0.0);
  }
}

TEST(PilotFim, DegenerateKeepsRangeOnly) {
  const auto g = link_geometry({{0, 0, 50}, {}, 0}, {{0, 0, 0}, {}, 0});
  const Fim3 J = pilot_fim(g, {2.0, 5.0, 7.0});
  EXPECT_NEAR(J(2, 2), 2.0, 1e-15);
  EXPECT_NEAR(J.trace(), 2.0, 1e-15);
}

TEST(Fim3, InverseAndEigenvalues) {
  const Fim3 a = Fim3::diagonal(4, 1, 1);
  const auto inv = a.inverse();
  ASSERT_TRUE(inv);
  EXPECT_NEAR(inv->trace(), 2.25, 1e-15);
  Fim3 m = Fim3::diagonal(3, 2, 1);
  m(0, 1) = m(1, 0) = 0.5;
  const auto ev = m.eigenvalues();
  EXPECT_NEAR(ev[0] + ev[1] + ev[2], m.trace(), 1e-12);
  EXPECT_NEAR(ev[0] * ev[1] * ev[2], m.determinant(), 1e-12);
  EXPECT_FALSE(Fim3{}.inverse());
}

TEST(RecursiveFim, NoMeasurementsDecayToZero) {
  // Scalar view a = 1/sigma^2: j_t = a - a^2 / (j_{t-1} + a).
  const MotionNoise n{0.005, 0.005, 0.005};
  const double a = 1.0 / (0.005 * 0.005);
  Fim3 J = Fim3::diagonal(a, a, a);
  for (int t = 0; t < 1000; ++t) J = recursive_fim(J, std::nullopt, n);
  EXPECT_LT(J(0, 0), 1e-3 * a);
  EXPECT_GT(J(0, 0), 0.0);
}

TEST(RecursiveFim, HugePriorGivesD) {
  const MotionNoise n{0.01, 0.02, 0.03};
  const Fim3 D = inertial_information(n);
  const Fim3 J = recursive_fim(Fim3::identity() * 1e12, std::nullopt, n);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(J(i, i), D(i, i), 1e-3 * D(i, i));
}

TEST(RecursiveFim, WeakMotionCouplingLeavesMeasurement) {
  const MotionNoise n{1e6, 1e6, 1e6};
  const Fim3 jp = Fim3::diagonal(5, 6, 7);
  const Fim3 J = recursive_fim(Fim3::diagonal(1, 1, 1), jp, n);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(J(i, i), jp(i, i), 1e-9);
}

TEST(RecursiveFim, ZeroMotionNoiseRejected) {
  EXPECT_THROW(recursive_fim(Fim3::identity(), std::nullopt, MotionNoise{0, 0.1, 0.1}), InvalidInput);
}

TEST(PcrbTrace, Examples) {
  EXPECT_NEAR(pcrb_trace(Fim3::identity()), 3.0, 1e-15);
  EXPECT_NEAR(pcrb_trace(Fim3::diagonal(4, 1, 1)), 2.25, 1e-15);
  EXPECT_TRUE(std::isinf(pcrb_trace(Fim3{})));
}

TEST(UncertaintyRadius, Examples) {
  EXPECT_NEAR(uncertainty_radius(Fim3::identity()).l, std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(uncertainty_radius(Fim3::diagonal(100, 100, 100)).l, 0.1732, 1e-4);
  EXPECT_NEAR(uncertainty_radius(Fim3::identity(), 2.0).l, 2 * std::sqrt(3.0), 1e-15);
}

TEST(InformationTrack, BoundGrowsWithoutPilotsAndShrinksWithThem) {
  const MotionNoise n;
  const auto g = link_geometry({{400, 100, 100}, {}, 0}, {{500, 100, 0}, {}, 0});
  const Fim3 jp = pilot_fim(g, ranging_intensities(1e4, RadioParams{}));
  InformationTrack t(n);
  t.step_many(jp, 5);
  const double after_pilots = pcrb_trace(t.current());
  double prev = after_pilots;
  for (int i = 0; i < 200; ++i) {
    t.step(std::nullopt);
    const double now = pcrb_trace(t.current());
    EXPECT_GE(now, prev * (1 - 1e-12));
    prev = now;
  }
  t.step_many(jp, 5);
  EXPECT_LT(pcrb_trace(t.current()), prev);
}

TEST(InformationTrack, FirstStepIsDPlusMeasurement) {
  const MotionNoise n;
  InformationTrack t(n);
  EXPECT_EQ(t.predicted(), inertial_information(n));
  const Fim3 jp = Fim3::diagonal(1, 2, 3);
  t.step(jp);
  EXPECT_EQ(t.current(), inertial_information(n) + jp);
}
