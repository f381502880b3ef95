#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ilc/link.hpp"
#include "ilc/oracles.hpp"

using namespace ilc;

namespace {
const RadioParams kRadio;
const LinkLimits kLimits;
}  // namespace

TEST(EffectiveSnr, Examples) {
  EXPECT_EQ(effective_snr(10, 0.0), 10.0);
  EXPECT_EQ(effective_snr(10, 1.0), 0.0);
  EXPECT_NEAR(effective_snr(10, 0.1), 4.5, 1e-15);
}

TEST(FrameSe, AllPilotFrameTendsToZero) {
  EXPECT_LT(frame_se_direct(100000, 1, 100.0, 0.0, kRadio), 1e-3);
}

TEST(FrameSe, RoutesAgree) {
  Rng rng(8);
  std::uniform_int_distribution<int> kd(1, 40);
  std::uniform_real_distribution<double> n(1, 500), fd(0, 1000), lg(0.5, 5);
  for (int i = 0; i < 1000; ++i) {
    const int k = kd(rng);
    const double nn = std::floor(n(rng)), g = std::pow(10.0, lg(rng)), f = fd(rng);
    if (effective_snr(g, frame_delta_sq(k, nn, g, f, kRadio)) <= 0) continue;
    EXPECT_NEAR(frame_se_direct(k, nn, g, f, kRadio), frame_se_closed_form(k, nn, g, f, kRadio), 1e-9);
  }
}

TEST(EvaluateFrame, CachesDerivedFields) {
  FramePlan p;
  p.k = 5;
  p.n = 95;
  p.beamwidth = 0.2;
  p.power = 0.04;
  const auto e = evaluate_frame(p, {100.0, 817.2, true}, kRadio);
  EXPECT_NEAR(e.snr, instantaneous_snr(0.04, 0.2, 100.0, kRadio), 1e-9);
  EXPECT_NEAR(e.se, frame_se_direct(5, 95, e.snr, 817.2, kRadio), 1e-12);
  const auto miss = evaluate_frame(p, {100.0, 817.2, false}, kRadio);
  EXPECT_EQ(miss.snr, 0.0);
  EXPECT_EQ(miss.se, 0.0);
  EXPECT_FALSE(frame_violation(miss, kLimits).empty());
}

TEST(FrameSe, CheckedEvaluationThrowsBelowThreshold) {
  FramePlan p;
  p.k = 1;
  p.n = 10;
  p.beamwidth = 0.5;
  p.power = 1e-9;
  try {
    frame_se(p, {500.0, 100.0, true}, kRadio, kLimits, 3);
    FAIL() << "expected Infeasible";
  } catch (const Infeasible& e) {
    EXPECT_EQ(e.constraint(), "C1");
    EXPECT_EQ(e.frame(), 3);
  }
}

TEST(AverageSe, Examples) {
  FramePlan a, b;
  a.se = 2.0;
  b.se = 4.0;
  a.snr_eff = b.snr_eff = 10;
  a.power = b.power = 1;
  a.beamwidth = b.beamwidth = kLimits.phi_min;
  EXPECT_EQ(average_se(std::vector<FramePlan>{a, b}, kLimits), 3.0);
  EXPECT_EQ(average_se(std::vector<FramePlan>{a}, kLimits), 2.0);
  EXPECT_EQ(average_se(std::vector<FramePlan>{b, b, b}, kLimits), 4.0);
  EXPECT_THROW(average_se(std::vector<FramePlan>{}, kLimits), InvalidInput);
}

TEST(MaxTransmission, StaticChannelReturnsCap) {
  EXPECT_EQ(max_transmission_duration(5, 100.0, kLimits.gamma_th, 0.0, kRadio, 1.0), 1.0);
}

TEST(MaxTransmission, VanishesAtThreshold) {
  const double g = 1.0001 * kLimits.gamma_th;
  // Needs enough pilots for the noise term alone to clear the bound.
  const double td = max_transmission_duration(200000, g, kLimits.gamma_th, 817.2, kRadio, 1.0);
  EXPECT_GE(td, 0.0);
  EXPECT_LT(td, 1e-4 * 1.0);
}

TEST(MaxTransmission, ErrorSitsOnBoundAndMatchesBisection) {
  Rng rng(4);
  std::uniform_int_distribution<int> kd(1, 30);
  std::uniform_real_distribution<double> lg(0.5, 4), fd(10, 1000);
  int checked = 0;
  while (checked < 300) {
    const int k = kd(rng);
    const double g = std::pow(10.0, lg(rng)), f = fd(rng);
    double td;
    try {
      td = max_transmission_duration(k, g, kLimits.gamma_th, f, kRadio, 1e4 * kRadio.T0);
    } catch (const Infeasible&) {
      continue;
    }
    const double n = td / kRadio.T0;
    if (n >= 1e4) continue;
    EXPECT_NEAR(frame_delta_sq(k, n, g, f, kRadio), delta_sq_bound(g, kLimits.gamma_th), 1e-9);
    EXPECT_NEAR(n, oracle::bisect_max_data_symbols(k, g, kLimits.gamma_th, f, kRadio, 1e4), 1e-6 * std::max(1.0, n));
    ++checked;
  }
}

TEST(MaxTransmission, NoiseDominatedIsInfeasible) {
  // One pilot at 4 dB: the noise term alone exceeds the error bound.
  EXPECT_THROW(max_transmission_duration(1, db_to_linear(4.0), kLimits.gamma_th, 100.0, kRadio, 1.0), Infeasible);
  EXPECT_THROW(max_transmission_duration(5, 0.5 * kLimits.gamma_th, kLimits.gamma_th, 100.0, kRadio, 1.0), Infeasible);
}

TEST(MinPower, HitsThresholdExactly) {
  for (int k : {1, 3, 10}) {
    for (double b2 : {0.0, 0.01, 0.1}) {
      const double g = min_snr(k, b2, kLimits.gamma_th);
      const double d2 = (1 + 2 * k * g * b2) / (1 + k * g);
      EXPECT_NEAR(effective_snr(g, d2), kLimits.gamma_th, 1e-9) << k << " " << b2;
    }
  }
}

TEST(MinPower, VanishingThreshold) {
  // The minimum SNR shrinks like sqrt(gamma_th) as the threshold vanishes.
  EXPECT_LT(min_snr(4, 0.01, 1e-20), 1e-9);
  EXPECT_LT(min_snr(4, 0.01, 1e-14), min_snr(4, 0.01, 1e-12));
  EXPECT_EQ(min_snr(4, 0.01, 0.0), 0.0);
}

TEST(MinPower, UnreachableThresholdThrows) {
  EXPECT_THROW(min_snr(4, 0.3, kLimits.gamma_th), Infeasible);
}

TEST(MinPower, ScalesWithGeometry) {
  const double p1 = min_power(2, 0.01, kLimits.gamma_th, 0.1, 100.0, kRadio);
  const double p2 = min_power(2, 0.01, kLimits.gamma_th, 0.1, 200.0, kRadio);
  EXPECT_NEAR(p2 / p1, 4.0, 1e-12);
}

TEST(FrameViolation, NamesConstraints) {
  FramePlan p;
  p.k = 1;
  p.n = 1;
  p.beamwidth = kLimits.phi_min;
  p.power = 1;
  p.snr_eff = 10;
  EXPECT_EQ(frame_violation(p, kLimits), "");
  p.beamwidth = 0.5 * kLimits.phi_min;
  EXPECT_EQ(frame_violation(p, kLimits), "C4");
  p.beamwidth = kLimits.phi_min;
  p.snr_eff = 1.0;
  EXPECT_EQ(frame_violation(p, kLimits), "C1");
  p.n = 0;
  EXPECT_EQ(frame_violation(p, kLimits), "C2");
}
