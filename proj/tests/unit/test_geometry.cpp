#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "rothman/error.hpp"
#include "rothman/fixtures.hpp"
#include "rothman/geometry.hpp"

using namespace rothman;

namespace {

std::vector<RiskPoint> random_points(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RiskPoint> pts;
  for (std::size_t i = 0; i < k; ++i) pts.push_back({u(rng), u(rng), PointKind::stratum, {}});
  return pts;
}

double cross(const RiskPoint& o, const RiskPoint& a, const RiskPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double segment_distance(const RiskPoint& p, const RiskPoint& a, const RiskPoint& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

TEST(Geometry, AssociationPointsFromCounts) {
  const auto pts = association_points(fixtures::whickham());
  EXPECT_DOUBLE_EQ(pts.crude.x, 230.0 / 732.0);
  EXPECT_DOUBLE_EQ(pts.crude.y, 139.0 / 582.0);
  EXPECT_DOUBLE_EQ(pts.strata[0].x, 65.0 / 539.0);
  EXPECT_DOUBLE_EQ(pts.strata[1].y, 42.0 / 49.0);
  EXPECT_EQ(pts.crude.kind, PointKind::crude);
}

TEST(Geometry, StudySampleStandardMatchesHandArithmetic) {
  const auto t = fixtures::whickham();
  const auto p = standardize(t, standard_population(t, StandardPreset::study_sample));
  // sum_c (n_c / N) r_c written out with long double.
  const long double w0 = 1072.0L / 1314.0L, w1 = 242.0L / 1314.0L;
  const long double x = w0 * 65.0L / 539.0L + w1 * 165.0L / 193.0L;
  const long double y = w0 * 97.0L / 533.0L + w1 * 42.0L / 49.0L;
  EXPECT_NEAR(p.x, static_cast<double>(x), 1e-15);
  EXPECT_NEAR(p.y, static_cast<double>(y), 1e-15);
  EXPECT_NEAR(p.x, 0.2562, 5e-4);
  EXPECT_NEAR(p.y, 0.3060, 5e-4);
}

TEST(Geometry, GroupStandardsReproduceCrudeCoordinatesExactly) {
  for (const auto& t : {fixtures::whickham(), fixtures::whickham_six_strata_synthetic()}) {
    const auto crude = association_points(t).crude;
    const auto exposed = standardize(t, standard_population(t, StandardPreset::exposed));
    const auto unexposed = standardize(t, standard_population(t, StandardPreset::unexposed));
    EXPECT_EQ(exposed.y, crude.y);
    EXPECT_EQ(unexposed.x, crude.x);
    const auto per_axis =
        standardize_per_axis(t, standard_population(t, StandardPreset::unexposed),
                             standard_population(t, StandardPreset::exposed));
    EXPECT_EQ(per_axis.x, crude.x);
    EXPECT_EQ(per_axis.y, crude.y);
  }
}

TEST(Geometry, TableAndPointPathsAgree) {
  const auto t = fixtures::whickham_six_strata_synthetic();
  const auto strata = association_points(t).strata;
  for (auto preset : {StandardPreset::study_sample, StandardPreset::exposed, StandardPreset::unexposed}) {
    const auto s = standard_population(t, preset);
    const auto a = standardize(t, s);
    const auto b = standardize(strata, s);
    EXPECT_NEAR(a.x, b.x, 1e-15);
    EXPECT_NEAR(a.y, b.y, 1e-15);
  }
}

TEST(Geometry, DegenerateStandardReturnsStratumPoint) {
  const auto strata = association_points(fixtures::whickham()).strata;
  const auto p = standardize(strata, StandardPopulation::custom({0.0, 1.0}));
  EXPECT_EQ(p.x, strata[1].x);
  EXPECT_EQ(p.y, strata[1].y);
}

TEST(Geometry, CustomWeightsAreValidated) {
  EXPECT_THROW(StandardPopulation::custom({0.5, 0.6}), ValidationError);
  EXPECT_THROW(StandardPopulation::custom({-0.1, 1.1}), ValidationError);
  EXPECT_THROW(StandardPopulation::custom({}), ValidationError);
  EXPECT_NO_THROW(StandardPopulation::custom({0.25, 0.75}));
  const auto strata = association_points(fixtures::whickham()).strata;
  EXPECT_THROW(standardize(strata, StandardPopulation::custom({0.2, 0.3, 0.5})), ValidationError);
}

TEST(Geometry, EmptyExposureGroupIsADomainError) {
  const StratifiedCohortTable t({{"a", {1, 2, 1, 2}}, {"b", {0, 0, 1, 2}}});
  EXPECT_THROW(association_points(t), DomainError);
}

TEST(Geometry, HullIsConvexAndContainsEveryPoint) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pts = random_points(rng, 3 + trial % 10);
    const auto hull = standardized_hull(pts);
    const auto& v = hull.vertices;
    ASSERT_GE(v.size(), 2u);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& a = v[i];
      const auto& b = v[(i + 1) % v.size()];
      EXPECT_EQ(a.x, pts[hull.vertex_sources[i]].x);
      if (v.size() > 2) {
        // Strictly convex turn at every vertex; every input point on the left.
        EXPECT_GT(cross(a, b, v[(i + 2) % v.size()]), 0.0);
        for (const auto& p : pts) EXPECT_GE(cross(a, b, p), -1e-12);
      }
    }
    for (const auto& p : pts) EXPECT_NE(contains(hull, p), Containment::outside);
    for (const auto& p : v) EXPECT_EQ(contains(hull, p), Containment::boundary);
  }
}

TEST(Geometry, HullOfTwoPointsIsASegment) {
  const auto strata = association_points(fixtures::whickham()).strata;
  const auto hull = standardized_hull(strata);
  EXPECT_TRUE(hull.is_segment());
  const auto mid = standardize(strata, StandardPopulation::custom({0.3, 0.7}));
  EXPECT_EQ(contains(hull, mid), Containment::boundary);
  EXPECT_EQ(contains(hull, association_points(fixtures::whickham()).crude), Containment::outside);
}

TEST(Geometry, CollinearAndDuplicatePointsAreNotVertices) {
  const std::vector<RiskPoint> pts = {{0.1, 0.1, PointKind::stratum, {}},
                                      {0.2, 0.2, PointKind::stratum, {}},
                                      {0.3, 0.3, PointKind::stratum, {}},
                                      {0.3, 0.3, PointKind::stratum, {}}};
  EXPECT_TRUE(standardized_hull(pts).is_segment());
  EXPECT_TRUE(standardized_hull(std::vector<RiskPoint>{pts[3], pts[2]}).is_point());
}

TEST(Geometry, DistanceMatchesBruteForce) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pts = random_points(rng, 2 + trial % 6);
    const auto hull = standardized_hull(pts);
    const RiskPoint q{u(rng), u(rng), PointKind::crude, {}};
    double brute = std::numeric_limits<double>::infinity();
    const auto& v = hull.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      brute = std::min(brute, segment_distance(q, v[i], v[(i + 1) % v.size()]));
    }
    const double d = distance_to_hull(hull, q);
    if (contains(hull, q) == Containment::outside) {
      EXPECT_NEAR(d, brute, 1e-12);
    } else {
      EXPECT_LE(d, 1e-9);
    }
  }
}

TEST(Geometry, CrudePointLiesInConfoundingRectangle) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<Count> total(1, 400);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Stratum> strata;
    const int k = 1 + trial % 6;
    for (int i = 0; i < k; ++i) {
      const Count n1 = total(rng), n0 = total(rng);
      strata.push_back({std::to_string(i),
                        {std::uniform_int_distribution<Count>(0, n1)(rng), n1,
                         std::uniform_int_distribution<Count>(0, n0)(rng), n0}});
    }
    const StratifiedCohortTable t(strata);
    const auto pts = association_points(t);
    EXPECT_TRUE(confounding_rectangle(pts.strata).contains(pts.crude, 1e-12));
  }
}

TEST(Geometry, WeightsForPointRecoverStandardizedPoints) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + trial % 5;
    const auto pts = random_points(rng, k);
    const auto w = testkit::random_simplex(rng, k);
    const auto target = standardize(pts, StandardPopulation::custom(w));
    const auto found = weights_for_point(pts, target);
    ASSERT_TRUE(found.has_value());
    const auto back = standardize(pts, found->weights);
    EXPECT_NEAR(back.x, target.x, 1e-9);
    EXPECT_NEAR(back.y, target.y, 1e-9);
    if (k == 2) {
      EXPECT_TRUE(found->unique);
      EXPECT_NEAR(found->weights.weight(0), w[0], 1e-9);
    }
  }
}

TEST(Geometry, WeightsForPointOutsideHullIsEmpty) {
  const auto pts = association_points(fixtures::whickham());
  EXPECT_FALSE(weights_for_point(pts.strata, pts.crude).has_value());
}

TEST(Geometry, RequireUnitSquare) {
  EXPECT_THROW(require_unit_square({1.2, 0.5, PointKind::stratum, {}}), DomainError);
  EXPECT_THROW(require_unit_square({NAN, 0.5, PointKind::stratum, {}}), DomainError);
  EXPECT_NO_THROW(require_unit_square({1.0, 0.0, PointKind::stratum, {}}));
}
