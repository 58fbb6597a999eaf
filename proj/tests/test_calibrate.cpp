#include <gtest/gtest.h>

#include <cmath>

#include "mixent/calibrate.hpp"

using namespace mixent;

// Smaller Monte Carlo budgets than the defaults keep these fast; the
// acceptance binary runs the default configuration.
namespace {
CalibrationTarget quick(double target) {
  CalibrationTarget t;
  t.target_median = target;
  t.n = 1000;
  t.n_mc = 300;
  return t;
}
}  // namespace

TEST(Calibrate, InclusionProbabilityTarget) {
  const double a = calibrate_alpha(quick(0.6321), RngStream(1, 0));
  EXPECT_NEAR(a, 0.8137, 0.01);
}

TEST(Calibrate, LogTwoTargetGivesUnitAlpha) {
  const double a = calibrate_alpha(quick(std::log(2.0)), RngStream(2, 0));
  EXPECT_NEAR(a, 1.0, 0.01);
}

TEST(Calibrate, FixedPointConsistency) {
  const RngStream rng(3, 0);
  CalibrationTarget t = quick(0.5);
  t.target_median = expected_median_scaled(4.0, t.n, t.n_mc, rng);
  t.lo = 2.0;
  t.hi = 6.0;
  EXPECT_NEAR(calibrate_alpha(t, rng), 4.0, 0.05);
}

TEST(Calibrate, AgreesWithAsymptoticRoot) {
  // Root of median(Gamma(a, 1)) = (1 - 1/e) a by incomplete-gamma inversion
  // (computed independently): 0.81373.
  const double a = calibrate_alpha(quick(1.0 - std::exp(-1.0)), RngStream(4, 0));
  EXPECT_NEAR(a, 0.81373, 0.01);
}

TEST(Calibrate, DeterministicPerSeed) {
  EXPECT_EQ(calibrate_alpha(quick(0.6321), RngStream(5, 0)), calibrate_alpha(quick(0.6321), RngStream(5, 0)));
}

TEST(Calibrate, BracketErrors) {
  CalibrationTarget inverted = quick(0.6321);
  inverted.lo = 1.5;
  inverted.hi = 0.5;
  EXPECT_THROW(calibrate_alpha(inverted, RngStream(6, 0)), DomainError);
  CalibrationTarget no_root = quick(0.6321);
  no_root.lo = 2.0;
  no_root.hi = 3.0;
  EXPECT_THROW(calibrate_alpha(no_root, RngStream(6, 0)), DomainError);
  EXPECT_THROW(calibrate_alpha(quick(1.2), RngStream(6, 0)), DomainError);
}

TEST(CalibrationCurve, MatchesPointEvaluations) {
  const RngStream rng(7, 0);
  const auto curve = calibration_curve({0.5, 1.0, 2.0}, 201, 50, rng);
  ASSERT_EQ(curve.size(), 3u);
  for (const auto& [a, m] : curve) EXPECT_EQ(m, expected_median_scaled(a, 201, 50, rng));
  EXPECT_LT(curve[0].second, curve[1].second);
  EXPECT_LT(curve[1].second, curve[2].second);
}
