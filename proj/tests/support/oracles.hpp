#pragma once

// Independent reference computations used only by the tests.

#include "hypext/geometry.hpp"
#include "hypext/one_point.hpp"

#include <span>
#include <vector>

namespace hypext::oracle {

struct GridMin {
  HPoint point;
  double value = 0.0;        // best node found; an upper bound on the minimum
  double lower_bound = 0.0;  // valid when the minimizer lies in the first grid
};

/// Brute-force minimum of y -> max_i d(y, f(x_i)) / d(xi, x_i) over a uniform
/// grid of `nodes`^m points in the tangent chart square of half-width
/// `half_width` at `center`, refined by halving windows of 21^m nodes around
/// the best node. The lower bound comes from the first grid: phi is
/// (max_i 1/d(xi, x_i))-Lipschitz and exp is at most sinh(rho)/rho expanding
/// on the chart ball of radius rho.
GridMin grid_minimize(const PartialMap& map, const HPoint& xi, const HPoint& center,
                      double half_width, int nodes = 201, int levels = 50);

/// Circumradius of the hyperbolic equilateral triangle of side s:
/// sinh^2 rho = (2/3)(cosh s - 1).
double circumradius(double side);

/// Direct hyperbolic law of cosines: arccosh(cosh l1 cosh l2 - sinh l1 sinh l2 cos theta).
double law_of_cosines(double theta, double l1, double l2);

/// exp_o(l1 u), exp_o(l2 w) with u, w unit tangents at `vertex` making angle theta.
std::pair<HPoint, HPoint> triangle_arms(const HPoint& vertex, double theta, double l1, double l2,
                                        const Vector& u_local, const Vector& v_local);

/// Min and max pairwise distance ratios of (sources -> images).
std::pair<double, double> ratio_range(std::span<const HPoint> sources,
                                      std::span<const HPoint> images);

}  // namespace hypext::oracle
