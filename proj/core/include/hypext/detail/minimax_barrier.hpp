#pragma once

// Log-barrier Newton method for the weighted minimax problem
//
//     minimize_y  max_i  a_i * d(y, p_i)^2
//
// on a space of constant curvature 0 or -1. Written as the smooth convex
// program  min tau  s.t.  a_i d_i(y)^2 <= tau,  and solved by Riemannian Newton
// steps in normal coordinates at the current iterate. Squared distances are
// smooth everywhere, so iterates may pass through the centers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace hypext::detail {

struct BarrierOptions {
  double relative_gap = 1e-11;  // stop once n * mu <= relative_gap * tau
  double mu_factor = 0.05;
  int max_newton = 400;         // total Newton steps over all centering rounds
  int max_centering = 40;       // per round; rounding noise can stall exact centering
  double centering_tol = 1e-7;
};

template <class Point>
struct BarrierResult {
  Point y;
  double tau = 0.0;
  double gap = 0.0;  // n * mu at the last centered point
  int iterations = 0;
  bool converged = false;
  std::vector<double> multipliers;
};

/// Space concept:
///   int dim() const;
///   auto chart(const Point& y) const;   // object with .log(p, Vector& out) -> double distance
///   Point retract(const Point& y, const Chart&, const Vector& step) const;
///   double distance(const Point& a, const Point& b) const;
///   static double kappa(double d);      // Hess(d^2/2) = kappa I + (1 - kappa) g g^T
template <class Space, class Point>
BarrierResult<Point> minimize_weighted_max(const Space& space, std::span<const Point> centers,
                                           std::span<const double> weights, Point start,
                                           const BarrierOptions& opts = {}) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const int m = space.dim();
  const std::size_t n = centers.size();

  BarrierResult<Point> out;
  out.y = std::move(start);

  auto max_value = [&](const Point& y) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = space.distance(y, centers[i]);
      v = std::max(v, weights[i] * d * d);
    }
    return v;
  };

  const double tau0 = max_value(out.y);
  if (n == 0) {
    out.converged = true;
    return out;
  }
  double tau = 1.1 * tau0 + 1e-12 + 1e-3 * tau0;
  double mu = std::max(tau, 1e-300) / static_cast<double>(n);

  std::vector<VectorXd> logs(n, VectorXd(m));
  std::vector<double> dist(n), slack(n);

  // Barrier objective scaled by 1/mu; +inf when infeasible.
  auto objective = [&](const Point& y, double t, double mu_now) {
    double f = t / mu_now;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = space.distance(y, centers[i]);
      const double s = t - weights[i] * d * d;
      if (!(s > 0.0)) {
        return std::numeric_limits<double>::infinity();
      }
      f -= std::log(s);
    }
    return f;
  };

  int steps = 0;
  bool stalled = false;
  while (steps < opts.max_newton) {
    // Centering by damped Newton.
    const int round_end = std::min(opts.max_newton, steps + opts.max_centering);
    for (; steps < round_end; ++steps) {
      const auto chart = space.chart(out.y);
      for (std::size_t i = 0; i < n; ++i) {
        dist[i] = chart.log(centers[i], logs[i]);
        slack[i] = tau - weights[i] * dist[i] * dist[i];
      }
      VectorXd grad = VectorXd::Zero(m + 1);
      MatrixXd hess = MatrixXd::Zero(m + 1, m + 1);
      grad[m] = 1.0 / mu;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = weights[i];
        const double s = slack[i];
        const double inv_s = 1.0 / s;
        const double k = Space::kappa(dist[i]);
        const VectorXd& L = logs[i];
        grad.head(m) += (-2.0 * a * inv_s) * L;
        grad[m] -= inv_s;
        // a * Hess(d^2) / s, with Hess(d^2) = 2 [k I + (1 - k) g g^T], g = -L / d
        hess.topLeftCorner(m, m).diagonal().array() += 2.0 * a * k * inv_s;
        if (dist[i] > 0.0) {
          hess.topLeftCorner(m, m) += (2.0 * a * (1.0 - k) * inv_s / (dist[i] * dist[i])) * L * L.transpose();
        }
        hess.topLeftCorner(m, m) += (4.0 * a * a * inv_s * inv_s) * L * L.transpose();
        hess.col(m).head(m) += (2.0 * a * inv_s * inv_s) * L;
        hess(m, m) += inv_s * inv_s;
      }
      hess.row(m).head(m) = hess.col(m).head(m).transpose();

      const Eigen::LDLT<MatrixXd> ldlt(hess);
      VectorXd step = ldlt.solve(-grad);
      if (!step.allFinite() || ldlt.info() != Eigen::Success) {
        step = -grad / std::max(hess.diagonal().maxCoeff(), 1.0);
      }
      double decrement = -grad.dot(step);
      if (!(decrement >= 0.0)) {
        step = -grad / std::max(hess.diagonal().maxCoeff(), 1.0);
        decrement = -grad.dot(step);
      }
      if (decrement / 2.0 <= opts.centering_tol) {
        break;
      }

      const double f0 = objective(out.y, tau, mu);
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        Point trial = space.retract(out.y, chart, alpha * step.head(m));
        const double t_trial = tau + alpha * step[m];
        const double f1 = objective(trial, t_trial, mu);
        if (f1 <= f0 - 0.25 * alpha * decrement) {
          out.y = std::move(trial);
          tau = t_trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        stalled = true;
        break;
      }
    }
    out.gap = static_cast<double>(n) * mu;
    if (stalled || out.gap <= opts.relative_gap * tau) {
      break;
    }
    mu *= opts.mu_factor;
  }

  out.tau = tau;
  out.iterations = steps;
  out.converged = !stalled && out.gap <= opts.relative_gap * tau * 10.0;
  out.multipliers.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = space.distance(out.y, centers[i]);
    const double s = std::max(tau - weights[i] * d * d, std::numeric_limits<double>::min());
    out.multipliers[i] = mu / s;
    total += out.multipliers[i];
  }
  if (total > 0.0) {
    for (double& l : out.multipliers) {
      l /= total;
    }
  }
  return out;
}

}  // namespace hypext::detail
