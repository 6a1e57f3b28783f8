#pragma once

// Pointwise geodesic averaging of maps into H^m. Maps are tables over a
// shared finite domain.

#include "hypext/geometry.hpp"
#include "hypext/one_point.hpp"

#include <span>
#include <string>
#include <vector>

namespace hypext {

struct MapTable {
  std::vector<HPoint> domain;
  std::vector<HPoint> images;
  std::string label;

  std::size_t size() const { return domain.size(); }
};

void validate(const MapTable& map);

/// x -> geodesic_point(f0(x), f1(x), t). Domains must be identical, in order.
MapTable interpolate_maps(const MapTable& f0, const MapTable& f1, double t);

/// Left fold F_1 = f_1, F_k = interpolate_maps(F_{k-1}, f_k, 1/k).
MapTable average_maps(std::span<const MapTable> maps);

/// Empirical Lipschitz constant of `map` restricted to the listed indices
/// (0 when fewer than two indices).
double restricted_lipschitz(const MapTable& map, std::span<const std::size_t> subset);

LipschitzWitness lipschitz_constant(const MapTable& map);

}  // namespace hypext
