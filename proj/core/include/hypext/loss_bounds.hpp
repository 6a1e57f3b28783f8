#pragma once

// Closed-form loss bounds for one-point extensions of C-Lipschitz maps, C < 1.

#include "hypext/geometry.hpp"

#include <numbers>

namespace hypext {

/// Additive defect of the right-angle law of cosines:
/// d_theta(pi/2, l, l') >= l + l' - kDelta for all l, l' >= 0.
inline constexpr double kDelta = std::numbers::ln2;

/// l1 + l2 - d_theta(pi/2, l1, l2), always in [0, log 2).
double delta_gap(double l1, double l2);

/// C + log(2) / r: the bound used when some active source is at distance >= r.
double c_hat(double C, double r);

/// arcsinh(C sinh r) / r: the bound used when every active source is within r.
double arcsinh_bound(double C, double r);

struct BoundsReport {
  double C = 0.0;
  double r_star = 0.0;
  double c_hat = 0.0;
  double arcsinh_value = 0.0;
  double c_star = 0.0;
  double delta = kDelta;
};

/// One-point loss constant C*(C) = min over r of max(c_hat, arcsinh_bound),
/// located by golden-section search on log r.
BoundsReport compute_c_star(double C);

/// exp_o(c log_o(x)): scales every geodesic ray from o by c.
HPoint radial_homothety(const HPoint& o, double c, const HPoint& x);

struct HomothetyConstants {
  /// sinh(c r) / sinh(r): lower bound on d(Hx, Hx') / d(x, x') over B_o(r).
  double forward = 1.0;
  /// sinh(r) / sinh(c r): Lipschitz constant of H^{-1} on B_o(c r).
  double inverse = 1.0;
};

HomothetyConstants homothety_lip_constants(double c, double r);

}  // namespace hypext
