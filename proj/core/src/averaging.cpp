#include "hypext/averaging.hpp"

#include <algorithm>
#include <stdexcept>

namespace hypext {

namespace {

void require_same_domain(const MapTable& a, const MapTable& b) {
  if (a.domain.size() != b.domain.size()) {
    throw std::invalid_argument("map tables have different domain sizes");
  }
  for (std::size_t i = 0; i < a.domain.size(); ++i) {
    if (!(a.domain[i] == b.domain[i])) {
      throw std::invalid_argument("map tables disagree on domain point " + std::to_string(i));
    }
  }
}

}  // namespace

void validate(const MapTable& map) {
  if (map.domain.size() != map.images.size()) {
    throw std::invalid_argument("MapTable: domain and images differ in length");
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      if (distance(map.domain[i], map.domain[j]) <= kCoincidence) {
        throw std::invalid_argument("MapTable: repeated domain point");
      }
    }
  }
}

MapTable interpolate_maps(const MapTable& f0, const MapTable& f1, double t) {
  require_same_domain(f0, f1);
  if (f0.images.size() != f0.domain.size() || f1.images.size() != f1.domain.size()) {
    throw std::invalid_argument("interpolate_maps: malformed table");
  }
  MapTable out;
  out.domain = f0.domain;
  out.label = f0.label + "~" + f1.label;
  out.images.reserve(f0.size());
  for (std::size_t i = 0; i < f0.size(); ++i) {
    out.images.push_back(geodesic_point(f0.images[i], f1.images[i], t));
  }
  return out;
}

MapTable average_maps(std::span<const MapTable> maps) {
  if (maps.empty()) {
    throw std::invalid_argument("average_maps: no maps");
  }
  MapTable acc = maps.front();
  for (std::size_t k = 1; k < maps.size(); ++k) {
    acc = interpolate_maps(acc, maps[k], 1.0 / static_cast<double>(k + 1));
  }
  acc.label = "average of " + std::to_string(maps.size());
  return acc;
}

double restricted_lipschitz(const MapTable& map, std::span<const std::size_t> subset) {
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const std::size_t i = subset[a];
      const std::size_t j = subset[b];
      const double ds = distance(map.domain.at(i), map.domain.at(j));
      if (ds <= kCoincidence) {
        throw std::invalid_argument("restricted_lipschitz: repeated domain point");
      }
      best = std::max(best, distance(map.images.at(i), map.images.at(j)) / ds);
    }
  }
  return best;
}

LipschitzWitness lipschitz_constant(const MapTable& map) {
  return lipschitz_constant(map.domain, map.images);
}

}  // namespace hypext
