#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rothman/chi_square.hpp"

using namespace rothman;

TEST(ChiSquare, CdfMatchesQuadratureOnGrid) {
  for (double df : {1.0, 2.0, 3.0, 5.0, 10.0}) {
    for (int i = 1; i <= 50; ++i) {
      const double x = 0.3 * i;
      EXPECT_NEAR(chi_square_cdf(x, df), testkit::chi_square_cdf_by_quadrature(x, df), 1e-8)
          << "df=" << df << " x=" << x;
    }
  }
}

TEST(ChiSquare, ClosedFormsForSmallDf) {
  for (double x : {0.01, 0.5, 3.84, 12.0, 40.0}) {
    EXPECT_NEAR(chi_square_cdf(x, 2.0), 1.0 - std::exp(-x / 2.0), 1e-14);
    EXPECT_NEAR(chi_square_cdf(x, 1.0), std::erf(std::sqrt(x / 2.0)), 1e-14);
    EXPECT_NEAR(chi_square_sf(x, 1.0), std::erfc(std::sqrt(x / 2.0)), 1e-14);
  }
}

TEST(ChiSquare, UpperTailKeepsRelativePrecision) {
  const double x = 150.0;
  EXPECT_NEAR(chi_square_sf(x, 1.0) / std::erfc(std::sqrt(x / 2.0)), 1.0, 1e-10);
}

TEST(ChiSquare, QuantileInvertsCdf) {
  EXPECT_NEAR(chi_square_quantile(0.95, 1.0), 3.841458820694124, 1e-9);
  for (double df : {1.0, 2.0, 4.0}) {
    for (double p : {0.01, 0.5, 0.9, 0.99}) {
      EXPECT_NEAR(chi_square_cdf(chi_square_quantile(p, df), df), p, 1e-10);
    }
  }
  EXPECT_EQ(chi_square_quantile(0.0, 1.0), 0.0);
}

TEST(ChiSquare, GammaComplementsSumToOne) {
  for (double a : {0.5, 1.0, 7.5}) {
    for (double x : {0.1, 1.0, 8.0, 30.0}) {
      EXPECT_NEAR(regularized_gamma_p(a, x) + regularized_gamma_q(a, x), 1.0, 1e-14);
    }
  }
}

TEST(ChiSquare, RejectsInvalidArguments) {
  EXPECT_THROW(chi_square_cdf(-1.0, 1.0), std::exception);
  EXPECT_THROW(chi_square_cdf(1.0, 0.0), std::exception);
  EXPECT_THROW(chi_square_quantile(1.0, 1.0), std::exception);
}
