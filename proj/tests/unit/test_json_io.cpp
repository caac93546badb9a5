#include <gtest/gtest.h>

#include "rothman/error.hpp"
#include "rothman/fixtures.hpp"
#include "rothman/json_io.hpp"

using namespace rothman;

TEST(JsonIo, RoundsToSixSignificantDigits) {
  EXPECT_EQ(round_sig6(1.5372345678), 1.53723);
  EXPECT_EQ(round_sig6(-0.0753761), -0.0753761);
  EXPECT_EQ(round_sig6(0.002419823), 0.00241982);
  EXPECT_EQ(round_sig6(0.0), 0.0);
}

TEST(JsonIo, RealsCarryFullPrecisionShadows) {
  const Json j = to_json(RiskPoint{1.0 / 3.0, 0.25, PointKind::crude, "c"});
  EXPECT_EQ(j["x"].get<double>(), 0.333333);
  EXPECT_EQ(j["x_full"].get<double>(), 1.0 / 3.0);
  EXPECT_EQ(j["kind"], "crude");
}

TEST(JsonIo, NonFiniteValuesBecomeStrings) {
  LrInterval i;
  i.lower = 0.0;
  i.upper = INFINITY;
  i.upper_bounded = false;
  const Json j = to_json(i);
  EXPECT_EQ(j["upper"], "+inf");
  EXPECT_EQ(j["upper_full"], "+inf");
  EXPECT_FALSE(j["upper_bounded"].get<bool>());
}

TEST(JsonIo, ReportHasFixedTopLevelKeys) {
  const Json j = to_json(analyze(fixtures::whickham()));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"points", "confounding", "measures", "collapsibility"}));
  ASSERT_EQ(j["measures"].size(), 4u);
  EXPECT_EQ(j["measures"][0]["measure"], "OR");
  EXPECT_EQ(j["measures"][3]["measure"], "HR");
  EXPECT_EQ(j["confounding"]["flag"], "off_segment");
}

TEST(JsonIo, ParsesPopulationSpec) {
  const auto s = parse_population_spec(
      R"({"stratum_probs": [0.5, 0.5], "exposure_probs": [0.2, 0.7],
          "po_probs": [[0.8, 0.1, 0.05, 0.05], [0.3, 0.3, 0.2, 0.2]]})");
  EXPECT_EQ(s.strata(), 2u);
  EXPECT_EQ(s.po_probs[1][3], 0.2);
}

TEST(JsonIo, PopulationSpecErrors) {
  EXPECT_THROW(parse_population_spec("{"), ParseError);
  EXPECT_THROW(parse_population_spec(R"({"stratum_probs": [1]})"), ParseError);
  EXPECT_THROW(parse_population_spec(
                   R"({"stratum_probs": [1], "exposure_probs": [0.5], "po_probs": [[0.5, 0.5]]})"),
               ParseError);
  EXPECT_THROW(parse_population_spec(
                   R"({"stratum_probs": [0.9], "exposure_probs": [0.5], "po_probs": [[0.25, 0.25, 0.25, 0.25]]})"),
               ValidationError);
}
