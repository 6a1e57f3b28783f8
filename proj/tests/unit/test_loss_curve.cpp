#include "hypext/loss_curve.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hypext;

TEST(TriangleInstance, Shape) {
  const PartialMap tri = triangle_instance(2.0, 0.9);
  EXPECT_NEAR(distance(tri.sources[0], tri.sources[1]), 2.0, 1e-12);
  EXPECT_NEAR(distance(tri.targets[1], tri.targets[2]), 1.8, 1e-12);
  EXPECT_NEAR(distance(tri.sources[2], HPoint::origin(2)), oracle::circumradius(2.0), 1e-12);
  EXPECT_NEAR(lipschitz_constant(tri).constant, 0.9, 1e-12);
}

TEST(LossCurve, Bounds) {
  const std::vector<double> grid{0.2, 0.5, 0.9};
  const std::vector<LossCurveRow> rows = loss_curve(grid, 4, 5);
  ASSERT_EQ(rows.size(), 3u);
  for (const LossCurveRow& r : rows) {
    EXPECT_GE(r.lower_bound, r.C - 1e-9);
    EXPECT_LE(r.lower_bound, r.c_star + 1e-6);
    EXPECT_LE(r.random_max_c_xi, r.c_star + 1e-6);
    EXPECT_LT(r.c_prime_empirical, 1.0);
    EXPECT_GE(r.num_bins, 1);
  }
  EXPECT_GE(rows[2].lower_bound, 0.9045 - 1e-4);
  EXPECT_GE(rows[2].triangle_c_xi, 0.9045 - 1e-4);
}

TEST(LossCurve, Deterministic) {
  const std::vector<double> grid{0.4};
  const auto a = loss_curve(grid, 3, 9);
  const auto b = loss_curve(grid, 3, 9);
  EXPECT_EQ(a[0].random_max_c_xi, b[0].random_max_c_xi);
  EXPECT_EQ(a[0].c_prime_empirical, b[0].c_prime_empirical);
}

TEST(LossCurve, Errors) {
  const std::vector<double> bad{1.2};
  EXPECT_THROW(loss_curve(bad, 2, 1), std::invalid_argument);
  const std::vector<double> ok{0.5};
  EXPECT_THROW(loss_curve(ok, 0, 1), std::invalid_argument);
}
