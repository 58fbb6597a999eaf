#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mixent/weights.hpp"

using namespace mixent;

TEST(WeightVector, ValidatesEntriesAndNormalization) {
  EXPECT_THROW(WeightVector({}, Normalization::Raw), DomainError);
  EXPECT_THROW(WeightVector({0.0, 0.0}, Normalization::Raw), DomainError);
  EXPECT_THROW(WeightVector({1.0, -0.1}, Normalization::Raw), DomainError);
  EXPECT_THROW(WeightVector({1.0, NAN}, Normalization::Raw), DomainError);
  EXPECT_THROW(WeightVector({0.5, 0.6}, Normalization::SumToOne), DomainError);
  EXPECT_THROW(WeightVector({1.0, 1.5}, Normalization::SumToN), DomainError);
  EXPECT_NO_THROW(WeightVector({0.25, 0.75}, Normalization::SumToOne));
  EXPECT_NO_THROW(WeightVector({0.5, 1.5}, Normalization::SumToN));
  EXPECT_NO_THROW(WeightVector({0.0, 3.0}, Normalization::Raw));
}

TEST(WeightVector, ScaledDropsNormalizationTag) {
  const auto w = WeightVector::unit(4);
  EXPECT_EQ(w.normalization(), Normalization::SumToN);
  const auto s = w.scaled(0.25);
  EXPECT_EQ(s.normalization(), Normalization::Raw);
  EXPECT_DOUBLE_EQ(s.sum(), 1.0);
  EXPECT_THROW(w.scaled(0.0), DomainError);
}

TEST(GenWeights, MultinomialSingleObservation) {
  RngStream rng(1, 0);
  const auto w = gen_weights(MultinomialBS{}, 1, rng);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0], 1.0);
}

TEST(GenWeights, MultinomialCountsAreIntegersSummingToN) {
  RngStream rng(2, 0);
  for (std::size_t n : {2u, 17u, 500u}) {
    const auto w = gen_weights(MultinomialBS{}, n, rng);
    EXPECT_EQ(w.normalization(), Normalization::Raw);
    EXPECT_EQ(w.sum(), static_cast<double>(n));
    for (double v : w.values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_EQ(v, std::floor(v));
    }
  }
}

TEST(GenWeights, MultinomialZeroFractionApproachesExpMinusOne) {
  const RngStream root(3, 0);
  const std::size_t n = 1000;
  double zeros = 0.0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    RngStream rng = root.substream(r);
    const auto w = gen_weights(MultinomialBS{}, n, rng);
    for (double v : w.values()) zeros += v == 0.0;
  }
  EXPECT_NEAR(zeros / (reps * static_cast<double>(n)), std::exp(-1.0), 0.03);
}

TEST(GenWeights, DirichletSumsToN) {
  RngStream rng(4, 0);
  for (double alpha : {0.05, 0.8137, 1.0, 4.0}) {
    for (std::size_t n : {1u, 2u, 100u, 1000u}) {
      const auto w = gen_weights(DirichletWLB{alpha}, n, rng);
      EXPECT_EQ(w.normalization(), Normalization::SumToN);
      EXPECT_NEAR(w.sum(), static_cast<double>(n), 1e-12 * n) << "alpha=" << alpha << " n=" << n;
    }
  }
}

TEST(GenWeights, TinyAlphaStillValid) {
  RngStream rng(5, 0);
  const auto w = gen_weights(DirichletWLB{1e-4}, 50, rng);
  EXPECT_NEAR(w.sum(), 50.0, 1e-9);
}

TEST(GenWeights, RejectsBadArguments) {
  RngStream rng(6, 0);
  EXPECT_THROW(gen_weights(MultinomialBS{}, 0, rng), DomainError);
  EXPECT_THROW(gen_weights(DirichletWLB{0.0}, 10, rng), DomainError);
  EXPECT_THROW(gen_weights(DirichletWLB{-1.0}, 10, rng), DomainError);
}

TEST(GenWeights, DirichletFirstCoordinateMatchesBetaMoments) {
  // w_1 / sum(w) ~ Beta(alpha, (n-1) alpha): mean 1/n, variance
  // (n-1) / (n^2 (n alpha + 1)).
  const RngStream root(7, 0);
  const double alpha = 0.8137;
  const std::size_t n = 20;
  const int reps = 40000;
  double s1 = 0.0;
  double s2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng = root.substream(r);
    const auto w = gen_weights(DirichletWLB{alpha}, n, rng);
    const double p = w[0] / w.sum();
    s1 += p;
    s2 += p * p;
  }
  const double mean = s1 / reps;
  const double var = s2 / reps - mean * mean;
  const double nd = static_cast<double>(n);
  const double beta_var = (nd - 1.0) / (nd * nd * (nd * alpha + 1.0));
  EXPECT_NEAR(mean, 1.0 / nd, 3.0 * std::sqrt(beta_var / reps));
  EXPECT_NEAR(var, beta_var, 0.05 * beta_var);
}

TEST(ExpectedMedianScaled, UnitAlphaGivesLogTwo) {
  const RngStream rng(8, 0);
  EXPECT_NEAR(expected_median_scaled(1.0, 1000, 400, rng), std::log(2.0), 0.01);
}

TEST(ExpectedMedianScaled, CalibratedAlphaGivesInclusionProbability) {
  const RngStream rng(9, 0);
  EXPECT_NEAR(expected_median_scaled(0.8137, 1000, 400, rng), 1.0 - std::exp(-1.0), 0.01);
}

TEST(ExpectedMedianScaled, LargeAlphaAboveBound) {
  // Gamma(4) median / mean = 0.918015.
  const RngStream rng(10, 0);
  EXPECT_GT(expected_median_scaled(4.0, 1000, 200, rng), 0.85);
}

TEST(ExpectedMedianScaled, StrictlyIncreasingInAlpha) {
  const RngStream rng(11, 0);
  const std::vector<double> grid{0.25, 0.5, 0.8137, 1.0, 2.0, 4.0};
  const std::size_t n = 201;
  const std::size_t n_mc = 400;
  std::vector<double> means;
  std::vector<double> ses;
  for (double a : grid) {
    // Per-replicate medians for a standard error estimate.
    std::vector<double> med(n_mc);
    for (std::size_t r = 0; r < n_mc; ++r) med[r] = expected_median_scaled(a, n, 1, rng.substream(1000 + r));
    const double m = std::accumulate(med.begin(), med.end(), 0.0) / n_mc;
    double ss = 0.0;
    for (double v : med) ss += (v - m) * (v - m);
    means.push_back(m);
    ses.push_back(std::sqrt(ss / (n_mc - 1) / n_mc));
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    EXPECT_GT(means[i] - means[i - 1], 3.0 * std::hypot(ses[i], ses[i - 1])) << "alpha=" << grid[i];
}

TEST(ExpectedMedianScaled, DeterministicGivenStream) {
  const RngStream rng(12, 3);
  EXPECT_EQ(expected_median_scaled(0.7, 101, 50, rng), expected_median_scaled(0.7, 101, 50, rng));
}

TEST(ExpectedMedianScaled, RejectsBadArguments) {
  const RngStream rng(13, 0);
  EXPECT_THROW(expected_median_scaled(0.0, 10, 10, rng), DomainError);
  EXPECT_THROW(expected_median_scaled(1.0, 1, 10, rng), DomainError);
  EXPECT_THROW(expected_median_scaled(1.0, 10, 0, rng), DomainError);
}
