#include <random>

#include <gtest/gtest.h>

#include "cautious/synth.hpp"

namespace cautious {
namespace {

TEST(SubsetGrowth, ExpectedSizeMatchesTable) {
  const std::vector<std::pair<double, double>> table{{0.2, 3.95}, {0.4, 3.18}, {0.6, 2.62}, {0.8, 2.25}, {1.0, 2.00}};
  for (const auto& [p, size] : table) EXPECT_NEAR(expected_subset_size(p, 5), size, 0.005) << p;
}

TEST(SubsetGrowth, SampledSizesMatchExpectation) {
  Rng rng(3);
  for (double p : {0.2, 0.6, 1.0}) {
    double total = 0.0;
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) total += std::popcount(grow_subset_mask(5, p, rng));
    EXPECT_NEAR(total / samples, expected_subset_size(p, 5), 0.05) << p;
  }
}

TEST(SubsetGrowth, AlwaysAtLeastTwoAttributes) {
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto m = grow_subset_mask(5, 0.9, rng);
    EXPECT_GE(std::popcount(m), 2);
    EXPECT_LT(m, Mask{1} << 5);
  }
}

TEST(SampleTheta, SingletonsPlusDistinctExtras) {
  Rng rng(6);
  GeneratorConfig cfg;
  cfg.alpha = 0.3;
  cfg.p = 0.7;
  const auto theta = sample_theta(cfg, rng);
  EXPECT_EQ(extra_subset_count(5, 0.3), 8U);
  EXPECT_EQ(theta.size(), 5U + 8U);
  for (int i = 1; i <= 5; ++i) EXPECT_TRUE(theta.contains(AttributeSubset::parse(5, std::to_string(i))));
}

TEST(SampleTheta, SeedDeterminesFamilyAndUtilities) {
  GeneratorConfig cfg;
  Rng a(42), b(42);
  const auto ta = sample_tier_function(cfg, a);
  const auto tb = sample_tier_function(cfg, b);
  EXPECT_EQ(ta.theta(), tb.theta());
  EXPECT_EQ(ta.thresholds(), tb.thresholds());
}

TEST(SampleTheta, RejectsInvalidConfiguration) {
  GeneratorConfig cfg;
  cfg.p = 0.0;
  Rng rng(1);
  EXPECT_THROW(sample_theta(cfg, rng), ValidationError);
  cfg.p = 0.5;
  cfg.alpha = 1.5;
  EXPECT_THROW(sample_theta(cfg, rng), ValidationError);
}

// The worked tier example, with subsets written 1-based.
TierFunction worked_tier_function(int tiers) {
  const auto theta = SubsetFamily::parse(5, "1,2,3,4,5,2+4+5,1+3");
  UtilityMap u;
  u.set(AttributeSubset::parse(5, "1"), 148.85);
  u.set(AttributeSubset::parse(5, "2"), 186.75);
  u.set(AttributeSubset::parse(5, "3"), 90.60);
  u.set(AttributeSubset::parse(5, "4"), -86.12);
  u.set(AttributeSubset::parse(5, "5"), 191.00);
  u.set(AttributeSubset::parse(5, "2+4+5"), -26.80);
  u.set(AttributeSubset::parse(5, "1+3"), 80.24);
  const auto universe = all_alternatives(5);
  return build_tier_function(theta, u, tiers, universe);
}

TEST(TierFunction, WorkedExample) {
  const auto tf = worked_tier_function(3);
  const auto a = Alternative::parse("01110");
  EXPECT_NEAR(tf.utility(a), 191.23, 1e-9);
  EXPECT_EQ(tf.assign(a), 2);
  EXPECT_NEAR(tf.f_min(), -86.12, 1e-9);
  EXPECT_NEAR(tf.f_max(), 697.44, 1e-9);
  EXPECT_EQ(tf.assign(Alternative::parse("11111")), 3);
  EXPECT_EQ(tf.assign(Alternative::parse("00010")), 1);
}

TEST(TierFunction, BoundaryGoesToLowerTier) {
  const auto tf = worked_tier_function(4);
  const auto& th = tf.thresholds();
  ASSERT_EQ(th.size(), 4U);
  EXPECT_EQ(tf.classify(th[0]), 1);
  EXPECT_EQ(tf.classify(th[1]), 2);
  EXPECT_EQ(tf.classify(th[1] + 1e-9), 3);
  EXPECT_EQ(tf.classify(tf.f_max()), 4);
}

TEST(TierFunction, ConstantUtilityIsOneTier) {
  const auto theta = SubsetFamily::singletons(2);
  UtilityMap u;
  u.set(AttributeSubset::parse(2, "1"), 0.0);
  u.set(AttributeSubset::parse(2, "2"), 0.0);
  const auto universe = all_alternatives(2);
  const auto tf = build_tier_function(theta, u, 5, universe);
  for (const auto& a : universe) EXPECT_EQ(tf.assign(a), 1);
}

TEST(TierFunction, PreferencesFollowHigherTiers) {
  const auto tf = worked_tier_function(3);
  std::vector<TierAssignment> tiers;
  for (const char* s : {"11111", "01110", "00010"}) tiers.push_back({Alternative::parse(s), tf.assign(Alternative::parse(s))});
  const auto r = preferences_from_tiers(5, tiers);
  EXPECT_EQ(r.size(), 3U);
  EXPECT_TRUE(r.contains(Alternative::parse("11111"), Alternative::parse("00010")));
}

}  // namespace
}  // namespace cautious
