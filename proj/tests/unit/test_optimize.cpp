#include <gtest/gtest.h>

#include <cmath>

#include "rothman/error.hpp"
#include "rothman/optimize.hpp"

using namespace rothman;

TEST(Optimize, FindsInteriorMinimum) {
  const auto r = minimize_on_unit_interval([](double t) { return (t - 0.3141) * (t - 0.3141) + 2.0; });
  // A flat minimum pins the argument only to about sqrt(machine epsilon).
  EXPECT_NEAR(r.argument, 0.3141, 1e-7);
  EXPECT_NEAR(r.value, 2.0, 1e-15);
}

TEST(Optimize, FindsEndpointMinima) {
  EXPECT_NEAR(minimize_on_unit_interval([](double t) { return t; }).argument, 0.0, 1e-12);
  EXPECT_NEAR(minimize_on_unit_interval([](double t) { return -t; }).argument, 1.0, 1e-12);
}

TEST(Optimize, GridEscapesLocalMinimum) {
  // Two wells; the deeper one is narrow and near 0.8.
  auto f = [](double t) {
    return -std::exp(-std::pow((t - 0.2) / 0.1, 2)) - 1.5 * std::exp(-std::pow((t - 0.8) / 0.02, 2));
  };
  EXPECT_NEAR(minimize_on_unit_interval(f).argument, 0.8, 1e-6);
}

TEST(Optimize, SkipsNanAndRejectsAllNan) {
  auto f = [](double t) { return t < 0.5 ? NAN : (t - 0.7) * (t - 0.7); };
  EXPECT_NEAR(minimize_on_unit_interval(f).argument, 0.7, 1e-8);
  EXPECT_THROW(minimize_on_unit_interval([](double) { return NAN; }), NumericalError);
}
