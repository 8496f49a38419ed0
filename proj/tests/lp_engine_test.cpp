#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cautious/lp/solver.hpp"
#include "cautious/lp_engine.hpp"
#include "support/instances.hpp"

namespace cautious {
namespace {

using testing::degree_versus_size;
using testing::interaction_ranking;
using testing::unifying_counterexample;

Alternative alt(const char* s) { return Alternative::parse(s); }

TEST(DifferenceRow, IndicatorDifferences) {
  const auto theta = SubsetFamily::parse(4, "1,2,1+2");
  EXPECT_EQ(difference_row(theta, alt("1100"), alt("1000")), (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(indicator_vector(theta, alt("1100")), (std::vector<int>{1, 1, 1}));
}

TEST(BuildP1, OneRowPerPairWithFreeUtilities) {
  const auto r = unifying_counterexample();
  const auto p = build_p1(SubsetFamily::singletons(4), r);
  EXPECT_EQ(p.constraints().size(), r.size());
  EXPECT_EQ(p.variables().size(), 4U);
  for (const auto& v : p.variables()) {
    EXPECT_TRUE(std::isinf(v.lower));
    EXPECT_TRUE(std::isinf(v.upper));
  }
}

TEST(Representability, InteractionRankingNeedsTheTriple) {
  const auto r = interaction_ranking();
  EXPECT_FALSE(is_representable(SubsetFamily::singletons(4), r));
  const auto theta1 = SubsetFamily::parse(4, "1,2,3,4,1+2+3");
  const auto fit = fit_representability(theta1, r);
  EXPECT_TRUE(fit.representable);
  EXPECT_NEAR(fit.slack_total, 0.0, 1e-9);
  for (const auto& p : r.pairs()) {
    EXPECT_GE(evaluate(theta1, fit.utilities, p.better) - evaluate(theta1, fit.utilities, p.worse), 1.0 - 1e-7);
  }
}

TEST(Evaluate, StatedUtilities) {
  const auto theta1 = SubsetFamily::parse(4, "1,2,3,4,1+2+3");
  UtilityMap u;
  const std::vector<std::pair<const char*, double>> values{{"1", 1}, {"2", 2}, {"3", 3}, {"4", 4}, {"1+2+3", -10}};
  for (const auto& [s, v] : values) u.set(AttributeSubset::parse(4, s), v);
  EXPECT_DOUBLE_EQ(evaluate(theta1, u, alt("1110")), -4.0);
  EXPECT_DOUBLE_EQ(evaluate(theta1, u, alt("0111")), 9.0);
}

TEST(Representability, EmptyPreferenceSetIsAlwaysRepresentable) {
  EXPECT_TRUE(is_representable(SubsetFamily(3), PreferenceSet(3)));
}

TEST(Representability, WidthMismatchIsRejected) {
  EXPECT_THROW(is_representable(SubsetFamily::singletons(3), unifying_counterexample()), DimensionError);
}

TEST(Certificate, ProvesInfeasibilityWithBoxedWeights) {
  const auto r = interaction_ranking();
  const auto cert = dual_certificate(SubsetFamily::singletons(4), r);
  EXPECT_TRUE(cert.proves_infeasibility());
  EXPECT_FALSE(cert.implicated.empty());
  for (double w : cert.weights) {
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
  const auto singletons = SubsetFamily::singletons(4);
  for (const auto& s : singletons.members()) EXPECT_NEAR(certificate_imbalance(s, cert), 0.0, 1e-7);
  EXPECT_TRUE(breaks_certificate(AttributeSubset::parse(4, "1+2+3"), cert));
}

TEST(Certificate, VanishesWhenRepresentable) {
  const auto cert = dual_certificate(SubsetFamily::parse(4, "1,2,3,4,1+2+3"), interaction_ranking());
  EXPECT_FALSE(cert.proves_infeasibility());
  EXPECT_TRUE(cert.implicated.empty());
}

TEST(Certificate, EmptyFamilyIsRefutedByEveryPair) {
  const auto r = unifying_counterexample();
  const auto cert = dual_certificate(SubsetFamily(4), r);
  EXPECT_NEAR(cert.objective, static_cast<double>(r.size()), 1e-7);
}

TEST(Dominance, CounterexampleFamiliesAgreeButUnionAbstains) {
  const auto r = unifying_counterexample();
  for (const char* theta : {"1,3,4", "1,2,4"}) {
    const auto v = dominance(SubsetFamily::parse(4, theta), r, alt("1000"), alt("0100"));
    EXPECT_EQ(v.verdict, Verdict::PreferFirst) << theta;
    ASSERT_TRUE(v.forward.has_value());
    EXPECT_LT(*v.forward, 0.0);
  }
  EXPECT_EQ(dominance(SubsetFamily::singletons(4), r, alt("1000"), alt("0100")).verdict, Verdict::NoPrediction);
}

TEST(Dominance, WitnessReversesTheComparison) {
  const auto r = unifying_counterexample();
  const auto theta = SubsetFamily::singletons(4);
  const std::vector<double> values{3, 5, -6, 1};
  const UtilityMap u(theta, values);
  for (const auto& p : r.pairs()) EXPECT_GE(evaluate(theta, u, p.better) - evaluate(theta, u, p.worse), 1.0);
  EXPECT_GT(evaluate(theta, u, alt("0100")), evaluate(theta, u, alt("1000")));
}

TEST(Dominance, UnboundedDirectionGivesNoPrediction) {
  PreferenceSet r(2);
  r.add(alt("10"), alt("00"));
  const auto v = dominance(SubsetFamily::singletons(2), r, alt("10"), alt("01"));
  EXPECT_EQ(v.verdict, Verdict::NoPrediction);
  EXPECT_FALSE(v.forward.has_value());
  EXPECT_FALSE(v.backward.has_value());
}

TEST(Dominance, EmptyPolyhedronIsAPreconditionFailure) {
  EXPECT_THROW(dominance(SubsetFamily::singletons(4), interaction_ranking(), alt("1000"), alt("0100")),
               PreconditionError);
}

TEST(Dominance, ObservedPairIsReproduced) {
  const auto r = unifying_counterexample();
  EXPECT_EQ(dominance(SubsetFamily::singletons(4), r, alt("1110"), alt("0110")).verdict, Verdict::PreferFirst);
  EXPECT_EQ(dominance(SubsetFamily::singletons(4), r, alt("0110"), alt("1110")).verdict, Verdict::PreferSecond);
}

TEST(Dominance, ExactBackendAgreesOnWorkedExamples) {
  EngineOptions exact;
  exact.backend = lp::Backend::ExactRational;
  const auto r = unifying_counterexample();
  const auto all = all_alternatives(4);
  for (const char* theta : {"1,3,4", "1,2,4", "1,2,3,4"}) {
    const auto fam = SubsetFamily::parse(4, theta);
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        EXPECT_EQ(dominance(fam, r, all[i], all[j]).verdict, dominance(fam, r, all[i], all[j], exact).verdict);
      }
    }
  }
  const auto ranking = interaction_ranking();
  EXPECT_EQ(is_representable(SubsetFamily::singletons(4), ranking, exact), false);
  EXPECT_EQ(is_representable(SubsetFamily::parse(4, "1,2,3,4,1+2+3"), ranking, exact), true);
}

TEST(PredictMatrix, FlagsObservedPairsAndCountsAll) {
  const auto r = unifying_counterexample();
  const std::vector<Alternative> alts{alt("1110"), alt("0001"), alt("1000"), alt("0100")};
  const auto m = predict_matrix(SubsetFamily::singletons(4), r, alts);
  ASSERT_EQ(m.size(), 6U);
  EXPECT_EQ(m[0].prediction, Prediction::Observed);
  EXPECT_TRUE(m[0].observed_first_better);
  const auto& last = m.back();
  EXPECT_EQ(last.first, 2U);
  EXPECT_EQ(last.second, 3U);
  EXPECT_EQ(last.prediction, Prediction::NoPrediction);
  EXPECT_TRUE(predict_matrix(SubsetFamily::singletons(4), r, std::vector<Alternative>{}).empty());
}

TEST(PredictMatrix, TenAlternativesGiveFortyFivePairs) {
  const auto r = degree_versus_size();
  auto alts = all_alternatives(4);
  alts.resize(10);
  EXPECT_EQ(predict_matrix(SubsetFamily::parse(4, "2"), r, alts).size(), 45U);
}

TEST(CompactRows, DominanceMatchesTheLiteralPolyhedron) {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 2;
    const auto theta = testing::random_family(rng, n, 2);
    const auto r = testing::utility_ordered_pairs(rng, theta, 10);
    const auto a = testing::random_alternative(rng, n);
    const auto b = testing::random_alternative(rng, n);
    if (a == b) continue;
    const auto fast = dominance(theta, r, a, b).verdict;
    auto literal = [&](const Alternative& x, const Alternative& y) {
      auto p = build_dominance_lp(theta, r, x, y);
      const auto out = lp::solve(p);
      return out.status == lp::Status::Optimal && *out.objective < -1e-7;
    };
    const Verdict slow = literal(a, b) ? Verdict::PreferFirst : literal(b, a) ? Verdict::PreferSecond : Verdict::NoPrediction;
    EXPECT_EQ(fast, slow) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 40);
}

TEST(TransitiveReduction, KeepsAdjacentTierPairsOnly) {
  const std::vector<TierAssignment> tiers{{alt("11"), 3}, {alt("10"), 2}, {alt("01"), 1}};
  const auto r = preferences_from_tiers(2, tiers);
  ASSERT_EQ(r.size(), 3U);
  const auto core = detail::transitive_reduction(r);
  EXPECT_EQ(core.size(), 2U);
  EXPECT_FALSE(core.contains(alt("11"), alt("01")));
}

}  // namespace
}  // namespace cautious
