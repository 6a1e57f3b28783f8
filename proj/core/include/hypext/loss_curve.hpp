#pragma once

// Monte-Carlo lower bounds on the one-point loss, next to the closed-form
// upper bounds.

#include "hypext/one_point.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hypext {

struct LossCurveOptions {
  int dimension = 2;
  std::size_t sources = 5;
  std::size_t challenge_points = 8;
  double source_radius = 2.0;
  double challenge_radius = 2.5;
  double triangle_side = 2.0;
  std::size_t reference_sample = 200;  // points of B_o(3) used to count bins
  double reference_radius = 3.0;
  SolverOptions solver;
};

struct LossCurveRow {
  double C = 0.0;
  int trials = 0;
  double lower_bound = 0.0;      // max(C, random_max_c_xi, triangle_c_xi)
  double random_max_c_xi = 0.0;
  double triangle_c_xi = 0.0;
  double c_star = 0.0;
  double c_prime_empirical = 0.0;
  int num_bins = 0;
};

/// Sources: equilateral triangle of side `side` around the origin of H^2.
/// Targets: the same shape with side C * side. The challenge point is the origin.
PartialMap triangle_instance(double side, double C);

std::vector<LossCurveRow> loss_curve(std::span<const double> c_grid, int trials,
                                     std::uint64_t seed, const LossCurveOptions& opts = {});

}  // namespace hypext
