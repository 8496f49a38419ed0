#include <gtest/gtest.h>

#include "cautious/json_io.hpp"
#include "support/instances.hpp"

namespace cautious {
namespace {

TEST(FamilyJson, RoundTrip) {
  const auto theta = SubsetFamily::parse(4, "1,3,1+2+4");
  const auto j = family_json(theta);
  EXPECT_EQ(j.dump(), R"(["1","3","1+2+4"])");
  EXPECT_EQ(family_from_json(4, j), theta);
  EXPECT_THROW(family_from_json(4, Json::object()), IngestionError);
  EXPECT_THROW(family_from_json(4, Json::array({1})), IngestionError);
}

TEST(ThetaMinJson, CounterexampleDocument) {
  const auto result = build_theta_min(testing::unifying_counterexample());
  const auto j = theta_min_json(result);
  EXPECT_EQ(j["families"].dump(), R"([["1","2","4"],["1","3","4"]])");
  EXPECT_EQ(j["unifying"].dump(), R"(["1","2","3","4"])");
  EXPECT_TRUE(j["complete"].get<bool>());
  EXPECT_EQ(j.begin().key(), "families");
}

TEST(ModelJson, LpmAndSvmDocuments) {
  const auto theta = SubsetFamily::singletons(4);
  const auto r = testing::unifying_counterexample();
  const auto lpm = lpm_json(lpm_fit(theta, r));
  EXPECT_EQ(lpm["kind"], "LPM");
  EXPECT_EQ(lpm["utilities"].size(), 4U);
  const auto svm = svm_json(svm_fit(svm_training_rows(theta, r)), theta);
  EXPECT_EQ(svm["weights"].size(), 8U);
}

TEST(CurveJson, MissingAcrIsNull) {
  CurvePoint p;
  p.step = 3;
  p.model = "LPM";
  EXPECT_TRUE(curve_point_json(p)["ACR"].is_null());
}

}  // namespace
}  // namespace cautious
