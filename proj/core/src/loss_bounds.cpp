#include "hypext/loss_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypext {

namespace {

double log_sinh(double x) {
  if (x > 30.0) {
    return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
  }
  return std::log(std::sinh(x));
}

void require_unit_interval(double C, const char* who, bool allow_one) {
  const bool ok = allow_one ? (C > 0.0 && C <= 1.0) : (C > 0.0 && C < 1.0);
  if (!ok) {
    throw std::invalid_argument(std::string(who) + ": C out of range");
  }
}

}  // namespace

double delta_gap(double l1, double l2) {
  return l1 + l2 - d_theta(std::numbers::pi / 2.0, l1, l2);
}

double c_hat(double C, double r) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("c_hat: r must be positive");
  }
  return C + kDelta / r;
}

double arcsinh_bound(double C, double r) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("arcsinh_bound: r must be positive");
  }
  if (!(C >= 0.0 && C <= 1.0)) {
    throw std::invalid_argument("arcsinh_bound: C must lie in [0, 1]");
  }
  if (C == 0.0) {
    return 0.0;
  }
  if (C == 1.0) {
    return 1.0;
  }
  if (r <= 30.0) {
    return std::asinh(C * std::sinh(r)) / r;
  }
  // asinh(z) = log(2z) + 1/(4 z^2) + O(z^-4) for large z = C sinh r.
  const double log_z = std::log(C) + log_sinh(r);
  if (log_z > 20.0) {
    return (log_z + std::numbers::ln2 + 0.25 * std::exp(-2.0 * log_z)) / r;
  }
  return std::asinh(std::exp(log_z)) / r;
}

BoundsReport compute_c_star(double C) {
  require_unit_interval(C, "compute_c_star", false);
  const double r_lo = kDelta / (1.0 - C) * (1.0 + 1e-6);
  const double r_hi = std::max(1e3, 10.0 * r_lo);
  auto objective = [C](double log_r) {
    const double r = std::exp(log_r);
    return std::max(c_hat(C, r), arcsinh_bound(C, r));
  };

  // c_hat decreases and arcsinh_bound increases in r, so the max is unimodal.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(r_lo);
  double b = std::log(r_hi);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > 1e-13) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }

  BoundsReport rep;
  rep.C = C;
  rep.r_star = std::exp((a + b) / 2.0);
  rep.c_hat = c_hat(C, rep.r_star);
  rep.arcsinh_value = arcsinh_bound(C, rep.r_star);
  rep.c_star = std::max(rep.c_hat, rep.arcsinh_value);
  rep.delta = kDelta;
  return rep;
}

HPoint radial_homothety(const HPoint& o, double c, const HPoint& x) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("radial_homothety: ratio must be nonnegative");
  }
  if (c == 1.0 || o == x) {
    return x;
  }
  return exp_map(o, c * log_map(o, x).vec);
}

HomothetyConstants homothety_lip_constants(double c, double r) {
  require_unit_interval(c, "homothety_lip_constants", true);
  if (!(r > 0.0)) {
    throw std::invalid_argument("homothety_lip_constants: r must be positive");
  }
  if (c == 1.0) {
    return {1.0, 1.0};
  }
  const double log_ratio = log_sinh(c * r) - log_sinh(r);
  return {std::exp(log_ratio), std::exp(-log_ratio)};
}

}  // namespace hypext
