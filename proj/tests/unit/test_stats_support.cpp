#include <gtest/gtest.h>

#include <random>

#include "stats_support.hpp"

using namespace testing_support;

TEST(Kolmogorov, KnownQuantiles) {
  // Q(1.3581) = 0.05 and Q(1.6276) = 0.01 for the limiting distribution.
  EXPECT_NEAR(KolmogorovQ(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(KolmogorovQ(1.6276), 0.01, 1e-4);
  EXPECT_EQ(KolmogorovQ(0.0), 1.0);
}

TEST(Kolmogorov, SameAndShiftedSamples) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> a(400), b(400), c(400);
  for (auto& x : a) x = z(rng);
  for (auto& x : b) x = z(rng);
  for (auto& x : c) x = z(rng) + 0.5;
  EXPECT_GT(KsTwoSamplePValue(a, b), 0.01);
  EXPECT_LT(KsTwoSamplePValue(a, c), 1e-6);
  EXPECT_NEAR(KsTwoSamplePValue(a, a), 1.0, 1e-12);
}

TEST(Moments, CorrelationAndSd) {
  const std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8}, c{4, 3, 2, 1};
  EXPECT_NEAR(Correlation(a, b), 1.0, 1e-15);
  EXPECT_NEAR(Correlation(a, c), -1.0, 1e-15);
  EXPECT_NEAR(SampleSd(a), std::sqrt(5.0 / 3.0), 1e-15);
}
