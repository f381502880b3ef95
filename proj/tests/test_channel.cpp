#include <gtest/gtest.h>

#include <cmath>

#include "ilc/channel.hpp"

using namespace ilc;

TEST(AntennaGain, InsideBeam) { EXPECT_NEAR(antenna_gain(0.5, 0.0, 0.0, RadioParams{}), 9.12, 1e-12); }

TEST(AntennaGain, OutsideAndBoundaryAreZero) {
  EXPECT_EQ(antenna_gain(0.1, 0.2, 0.0, RadioParams{}), 0.0);
  EXPECT_EQ(antenna_gain(0.1, 0.1, 0.0, RadioParams{}), 0.0);
  EXPECT_EQ(antenna_gain(0.1, 0.0, -0.1, RadioParams{}), 0.0);
  EXPECT_GT(antenna_gain(0.1, 0.0999, 0.0999, RadioParams{}), 0.0);
}

TEST(Snr, TableDefaultsExample) {
  const RadioParams p;
  const double g = instantaneous_snr(1.0, 0.1, 100.0, p);
  EXPECT_NEAR(g, 2.28e4, 1e-6 * 2.28e4);
  EXPECT_NEAR(linear_to_db(g), 43.58, 0.01);
}

TEST(Snr, ScalesWithPowerAndInverseSquareDistance) {
  const RadioParams p;
  EXPECT_NEAR(instantaneous_snr(2.0, 0.2, 50.0, p) / instantaneous_snr(1.0, 0.2, 100.0, p), 8.0, 1e-12);
}

TEST(Correlation, Examples) {
  const RadioParams p;
  EXPECT_EQ(correlation(100, 0.0, p), 1.0);
  EXPECT_EQ(correlation(0, 817.2, p), 1.0);
  EXPECT_NEAR(correlation(100, 817.2, p), 0.9578, 1e-4);
  EXPECT_THROW(correlation(-1, 10, p), InvalidInput);
}

TEST(EstimationMse, Examples) {
  EXPECT_NEAR(estimation_mse(5, 10, 1.0).total, 1.0 / 51, 1e-15);
  EXPECT_NEAR(estimation_mse(5, 10, 0.95).total, 1.0 / 51 + 2 * 50 * 0.05 / 51, 1e-12);
  EXPECT_NEAR(estimation_mse(5, 10, 0.95).total, 0.117647, 1e-6);
  EXPECT_NEAR(estimation_mse(3, 1e-12, 0.7).total, 1.0, 1e-9);
}

TEST(EstimationMse, ZeroPilotsRejected) { EXPECT_THROW(estimation_mse(0, 10, 1.0), InvalidInput); }

TEST(EstimationMse, MonotoneInPilotsWithoutDoppler) {
  for (int k = 1; k < 50; ++k) EXPECT_LT(estimation_mse(k + 1, 3.0, 1.0).total, estimation_mse(k, 3.0, 1.0).total);
}

TEST(EstimationMse, SplitsIntoNoiseAndDopplerTerms) {
  const auto e = estimation_mse(4, 7.0, 0.9);
  EXPECT_NEAR(e.noise_term + e.doppler_term, e.total, 1e-15);
  EXPECT_NEAR(e.noise_term, 1.0 / 29, 1e-15);
}

TEST(MarkovSimulation, MatchesClosedFormAtPaperPoint) {
  const int gap = 8;
  const double step = std::pow(0.95, 1.0 / gap);
  const auto mc = simulate_markov_channel(5, gap, 10.0, step, 1'000'000, 11);
  EXPECT_NEAR(mc.mean, 0.117647, 0.02 * 0.117647);
  EXPECT_LT(std::abs(mc.mean - 0.117647), 3 * mc.std_error + 1e-4);
}

TEST(MarkovSimulation, NoSignalLimitIsOne) {
  const auto mc = simulate_markov_channel(4, 8, 1e-9, 0.99, 200'000, 5);
  EXPECT_NEAR(mc.mean, 1.0, 0.02);
}

TEST(MarkovSimulation, PerfectEstimationLimit) {
  const auto mc = simulate_markov_channel(64, 8, 1e6, 1.0, 20'000, 5);
  EXPECT_LT(mc.mean, 1e-6);
}

TEST(MarkovSimulation, DeterministicAcrossWorkerCounts) {
  const auto a = simulate_markov_channel(3, 4, 2.0, 0.97, 50'000, 77, 1);
  const auto b = simulate_markov_channel(3, 4, 2.0, 0.97, 50'000, 77, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MarkovSimulation, ZeroTrialsRejected) { EXPECT_THROW(simulate_markov_channel(1, 1, 1.0, 0.9, 0, 1), InvalidInput); }

TEST(RadioParams, Validation) {
  RadioParams p;
  EXPECT_NO_THROW(p.validate());
  p.kappa = 1.0;
  EXPECT_THROW(p.validate(), InvalidInput);
}
