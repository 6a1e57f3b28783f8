#include "hypext/random.hpp"

#include "hypext/loss_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace hypext {

namespace {

Vector gaussian(int m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(m);
  for (int i = 0; i < m; ++i) {
    v[i] = normal(rng);
  }
  return v;
}

// Radius with density proportional to sinh^{m-1} on [0, radius].
double sample_radius(int m, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (m == 1) {
    return radius * unit(rng);
  }
  if (m == 2) {
    return std::acosh(1.0 + unit(rng) * (std::cosh(radius) - 1.0));
  }
  const double top = std::pow(std::sinh(radius), m - 1);
  for (;;) {
    const double r = radius * unit(rng);
    if (unit(rng) * top <= std::pow(std::sinh(r), m - 1)) {
      return r;
    }
  }
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

TangentVec random_unit_tangent(const HPoint& base, Rng& rng) {
  Vector local;
  do {
    local = gaussian(base.dimension(), rng);
  } while (local.norm() < 1e-12);
  local.normalize();
  return TangentVec::from_frame(base, local);
}

HPoint uniform_in_ball(const HPoint& center, double radius, Rng& rng) {
  if (!(radius >= 0.0)) {
    throw std::invalid_argument("uniform_in_ball: negative radius");
  }
  const double r = sample_radius(center.dimension(), radius, rng);
  const TangentVec u = random_unit_tangent(center, rng);
  return exp_map(center, r * u.vec);
}

std::vector<HPoint> sample_ball(const HPoint& center, double radius, std::size_t count, Rng& rng) {
  std::vector<HPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(uniform_in_ball(center, radius, rng));
  }
  return out;
}

HPoint random_point_at_distance(const HPoint& from, double dist, Rng& rng) {
  const TangentVec u = random_unit_tangent(from, rng);
  return exp_map(from, dist * u.vec);
}

PartialMap random_lipschitz_map(int dimension, std::size_t n, double C, Rng& rng,
                                const InstanceOptions& opts) {
  if (n == 0 || !(C > 0.0)) {
    throw std::invalid_argument("random_lipschitz_map: need n >= 1 and C > 0");
  }
  const HPoint o = HPoint::origin(dimension);
  PartialMap map;
  map.declared_C = C;
  while (map.sources.size() < n) {
    HPoint p = uniform_in_ball(o, opts.source_radius, rng);
    bool far_enough = true;
    for (const HPoint& q : map.sources) {
      if (distance(p, q) < opts.min_separation) {
        far_enough = false;
        break;
      }
    }
    if (far_enough) {
      map.sources.push_back(std::move(p));
    }
  }

  std::uniform_real_distribution<double> spread(0.6, 1.4);
  const double kappa = std::max(C, 1e-3) * spread(rng);
  const HPoint image_center = uniform_in_ball(o, 1.0, rng);
  std::vector<HPoint> raw;
  raw.reserve(n);
  for (const HPoint& x : map.sources) {
    // Move the configuration to image_center, expand by kappa, then jitter.
    const Vector local = to_frame(o, log_map(o, x).vec) * kappa;
    HPoint y = exp_map(image_center, from_frame(image_center, local));
    const double jitter = opts.noise * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    y = exp_map(y, jitter * random_unit_tangent(y, rng).vec);
    raw.push_back(std::move(y));
  }

  double lip = 0.0;
  if (n >= 2) {
    lip = lipschitz_constant(map.sources, raw).constant;
  }
  const double s = lip > C ? (C / lip) * (1.0 - 1e-12) : 1.0;
  for (HPoint& y : raw) {
    map.targets.push_back(radial_homothety(image_center, s, y));
  }
  validate(map);
  return map;
}

std::vector<HPoint> random_challenge_points(const PartialMap& map, double radius,
                                            std::size_t count, Rng& rng, double min_gap) {
  const HPoint o = HPoint::origin(map.dimension());
  std::vector<HPoint> out;
  while (out.size() < count) {
    HPoint p = uniform_in_ball(o, radius, rng);
    bool ok = true;
    for (const HPoint& s : map.sources) {
      if (distance(p, s) < min_gap) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace hypext
