#pragma once

// Seeded generators for points, samples and valid C-Lipschitz instances.

#include "hypext/geometry.hpp"
#include "hypext/one_point.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace hypext {

using Rng = std::mt19937_64;

/// Independent stream for trial `index` derived from `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

/// Unit tangent vector at `base`, uniform over directions.
TangentVec random_unit_tangent(const HPoint& base, Rng& rng);

/// Point uniform (w.r.t. hyperbolic volume) in the closed ball B_center(radius).
HPoint uniform_in_ball(const HPoint& center, double radius, Rng& rng);

std::vector<HPoint> sample_ball(const HPoint& center, double radius, std::size_t count, Rng& rng);

/// Point at distance `dist` from `from` in a uniformly random direction.
HPoint random_point_at_distance(const HPoint& from, double dist, Rng& rng);

struct InstanceOptions {
  double source_radius = 2.0;
  double noise = 0.3;           // tangent perturbation of the images
  double min_separation = 1e-3; // between sources
};

/// Random map with Lip <= C: sources uniform in B_o(radius), images from an
/// expanding radial homothety plus noise, then contracted by a homothety of
/// ratio min(1, C / Lip) so the bound holds.
PartialMap random_lipschitz_map(int dimension, std::size_t n, double C, Rng& rng,
                                const InstanceOptions& opts = {});

/// `count` points in B_o(radius) at distance >= min_gap from every source.
std::vector<HPoint> random_challenge_points(const PartialMap& map, double radius,
                                            std::size_t count, Rng& rng, double min_gap = 1e-3);

}  // namespace hypext
