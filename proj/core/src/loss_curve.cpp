#include "hypext/loss_curve.hpp"

#include "hypext/loss_bounds.hpp"
#include "hypext/net.hpp"
#include "hypext/pipeline.hpp"
#include "hypext/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hypext {

namespace {

double circumradius(double side) {
  return std::asinh(std::sqrt((2.0 / 3.0) * (std::cosh(side) - 1.0)));
}

std::vector<HPoint> triangle(double side) {
  const HPoint o = HPoint::origin(2);
  const double rho = circumradius(side);
  std::vector<HPoint> out;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    Vector local(2);
    local << std::cos(a), std::sin(a);
    out.push_back(exp_map(o, from_frame(o, rho * local)));
  }
  return out;
}

}  // namespace

PartialMap triangle_instance(double side, double C) {
  if (!(side > 0.0) || !(C > 0.0)) {
    throw std::invalid_argument("triangle_instance: side and C must be positive");
  }
  PartialMap map;
  map.sources = triangle(side);
  map.targets = triangle(C * side);
  map.declared_C = C;
  return map;
}

std::vector<LossCurveRow> loss_curve(std::span<const double> c_grid, int trials,
                                     std::uint64_t seed, const LossCurveOptions& opts) {
  if (trials < 1) {
    throw std::invalid_argument("loss_curve: trials must be >= 1");
  }
  std::vector<LossCurveRow> rows;
  for (std::size_t g = 0; g < c_grid.size(); ++g) {
    const double C = c_grid[g];
    if (!(C > 0.0 && C < 1.0)) {
      throw std::invalid_argument("loss_curve: C must lie in (0, 1)");
    }
    LossCurveRow row;
    row.C = C;
    row.trials = trials;
    row.c_star = compute_c_star(C).c_star;

    for (int t = 0; t < trials; ++t) {
      Rng rng = make_stream(seed, (static_cast<std::uint64_t>(g) << 32) | static_cast<std::uint64_t>(t));
      InstanceOptions inst;
      inst.source_radius = opts.source_radius;
      const PartialMap map = random_lipschitz_map(opts.dimension, opts.sources, C, rng, inst);
      for (const HPoint& xi :
           random_challenge_points(map, opts.challenge_radius, opts.challenge_points, rng)) {
        row.random_max_c_xi = std::max(row.random_max_c_xi, solve_one_point(map, xi, opts.solver).c_xi);
      }
    }

    const PartialMap tri = triangle_instance(opts.triangle_side, C);
    row.triangle_c_xi = solve_one_point(tri, HPoint::origin(2), opts.solver).c_xi;
    row.lower_bound = std::max({C, row.random_max_c_xi, row.triangle_c_xi});

    const PipelineConfig cfg = choose_parameters(C);
    Rng ref = make_stream(seed, 0xffffffffull << 32 | g);
    const std::vector<HPoint> sample = sample_ball(HPoint::origin(opts.dimension), opts.reference_radius,
                                                   opts.reference_sample, ref);
    const Net net = build_net(sample, cfg.epsilon, cfg.R);
    row.num_bins = net.num_bins;
    row.c_prime_empirical = 1.0 - (1.0 - std::sqrt(cfg.c_star)) / net.num_bins;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hypext
