#include "hypext/net.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hypext {

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = (a + b) / 2.0;
  const double lm = (a + m) / 2.0;
  const double rm = (m + b) / 2.0;
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f((a + b) / 2.0);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Two passes: the first estimates the magnitude for the relative tolerance.
  const double rough = adaptive_simpson(f, a, b, fa, fm, fb, whole, 1e-6 * std::abs(whole), 30);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * std::abs(rough), 50);
}

// Surface area of the unit sphere S^{m-1}.
double unit_sphere_area(int m) {
  return 2.0 * std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0);
}

}  // namespace

std::vector<std::size_t> greedy_net_indices(std::span<const HPoint> sample, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("greedy_net: epsilon must be positive");
  }
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    bool covered = false;
    for (std::size_t c : chosen) {
      if (distance(sample[i], sample[c]) < epsilon) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      chosen.push_back(i);
    }
  }
  return chosen;
}

std::vector<HPoint> greedy_net(std::span<const HPoint> sample, double epsilon) {
  std::vector<HPoint> out;
  for (std::size_t i : greedy_net_indices(sample, epsilon)) {
    out.push_back(sample[i]);
  }
  return out;
}

BinAssignment assign_bins(std::span<const HPoint> centers, double R) {
  if (!(R > 0.0)) {
    throw std::invalid_argument("assign_bins: R must be positive");
  }
  BinAssignment out;
  out.bin_of.assign(centers.size(), -1);
  std::vector<char> blocked;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    blocked.assign(static_cast<std::size_t>(out.num_bins) + 1, 0);
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(centers[i], centers[j]) < R) {
        blocked[static_cast<std::size_t>(out.bin_of[j])] = 1;
      }
    }
    int bin = 0;
    while (blocked[static_cast<std::size_t>(bin)]) {
      ++bin;
    }
    out.bin_of[i] = bin;
    out.num_bins = std::max(out.num_bins, bin + 1);
  }
  return out;
}

double hyperbolic_ball_volume(int m, double radius) {
  if (m < 1) {
    throw std::invalid_argument("hyperbolic_ball_volume: m must be >= 1");
  }
  if (!(radius >= 0.0)) {
    throw std::invalid_argument("hyperbolic_ball_volume: negative radius");
  }
  switch (m) {
    case 1:
      return 2.0 * radius;
    case 2:
      return 2.0 * std::numbers::pi * (std::cosh(radius) - 1.0);
    case 3:
      return std::numbers::pi * (std::sinh(2.0 * radius) - 2.0 * radius);
    default:
      break;
  }
  if (radius == 0.0) {
    return 0.0;
  }
  const auto integrand = [m](double t) { return std::pow(std::sinh(t), m - 1); };
  return unit_sphere_area(m) * integrate(integrand, 0.0, radius, 1e-10);
}

double euclidean_ball_volume(int m, double radius) {
  if (m < 1) {
    throw std::invalid_argument("euclidean_ball_volume: m must be >= 1");
  }
  return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0) * std::pow(radius, m);
}

std::uint64_t volume_bound_N(int m, double R, double epsilon) {
  if (!(epsilon > 0.0) || !(R > 0.0)) {
    throw std::invalid_argument("volume_bound_N: R and epsilon must be positive");
  }
  const double ratio =
      hyperbolic_ball_volume(m, R + epsilon / 2.0) / euclidean_ball_volume(m, epsilon / 2.0);
  const double n = std::ceil(ratio);
  if (!std::isfinite(n) || n >= 18446744073709549568.0) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(n);
}

std::vector<std::vector<std::size_t>> Net::bins() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(num_bins));
  for (std::size_t i = 0; i < bin_of.size(); ++i) {
    out[static_cast<std::size_t>(bin_of[i])].push_back(i);
  }
  return out;
}

Net build_net(std::span<const HPoint> sample, double epsilon, double R) {
  if (sample.empty()) {
    throw std::invalid_argument("build_net: empty sample");
  }
  if (!(R > epsilon)) {
    throw std::invalid_argument("build_net: R must exceed epsilon");
  }
  Net net;
  net.epsilon = epsilon;
  net.R = R;
  net.center_indices = greedy_net_indices(sample, epsilon);
  for (std::size_t i : net.center_indices) {
    net.centers.push_back(sample[i]);
  }
  BinAssignment bins = assign_bins(net.centers, R);
  net.bin_of = std::move(bins.bin_of);
  net.num_bins = bins.num_bins;
  net.theoretical_N = volume_bound_N(sample.front().dimension(), R, epsilon);
  return net;
}

}  // namespace hypext
