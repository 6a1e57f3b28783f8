#include "hypext/one_point.hpp"

#include "hypext/detail/minimax_barrier.hpp"
#include "hypext/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypext {

namespace {

struct HyperbolicChart {
  const HPoint& y;
  Matrix frame;

  double log(const HPoint& p, Vector& out) const {
    const double d = distance(y, p);
    Vector v = log_map(y, p, d).vec;
    v[0] = -v[0];
    out.noalias() = frame.transpose() * v;
    return d;
  }
};

struct HyperbolicSpace {
  int m;

  int dim() const { return m; }
  HyperbolicChart chart(const HPoint& y) const { return {y, tangent_frame(y)}; }
  HPoint retract(const HPoint& y, const HyperbolicChart& c, const Vector& step) const {
    return exp_map(y, c.frame * step);
  }
  double distance(const HPoint& a, const HPoint& b) const { return hypext::distance(a, b); }
  static double kappa(double d) {
    if (d < 1e-4) {
      return 1.0 + d * d / 3.0;
    }
    return d / std::tanh(d);
  }
};

struct EuclideanChart {
  const Vector& y;
  double log(const Vector& p, Vector& out) const {
    out.noalias() = p - y;
    return out.norm();
  }
};

struct EuclideanSpace {
  int m;

  int dim() const { return m; }
  EuclideanChart chart(const Vector& y) const { return {y}; }
  Vector retract(const Vector& y, const EuclideanChart&, const Vector& step) const {
    return y + step;
  }
  double distance(const Vector& a, const Vector& b) const { return (a - b).norm(); }
  static double kappa(double) { return 1.0; }
};

bool all_targets_equal(const PartialMap& map) {
  for (const HPoint& t : map.targets) {
    if (!(t == map.targets.front()) && distance(t, map.targets.front()) > 0.0) {
      return false;
    }
  }
  return true;
}

std::vector<double> ratios_at(const PartialMap& map, const std::vector<double>& lengths,
                              const HPoint& y) {
  std::vector<double> r(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    r[i] = distance(y, map.targets[i]) / lengths[i];
  }
  return r;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

struct SubgradientRun {
  HPoint y;
  int iterations = 0;
  double last_step = 0.0;
};

SubgradientRun subgradient_descent(const PartialMap& map, const std::vector<double>& lengths,
                                   HPoint start, const SolverOptions& opts) {
  double spread = 0.0;
  for (const HPoint& t : map.targets) {
    spread += distance(start, t);
  }
  spread /= static_cast<double>(map.size());
  const double step0 = 0.1 * (spread > 0.0 ? spread : 1.0);

  HPoint y = start;
  HPoint best = start;
  double best_value = max_of(ratios_at(map, lengths, start));
  int k = 1;
  double step = step0;
  for (; k <= opts.max_iters; ++k) {
    const std::vector<double> r = ratios_at(map, lengths, y);
    const double top = max_of(r);
    const Matrix frame = tangent_frame(y);
    Vector direction = Vector::Zero(y.dimension());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] >= top * (1.0 - 1e-9)) {
        Vector v = log_map(y, map.targets[i]).vec;
        v[0] = -v[0];
        Vector local = frame.transpose() * v;
        const double nv = local.norm();
        if (nv > 0.0) {
          direction += local / nv;
        }
      }
    }
    const double nd = direction.norm();
    if (nd == 0.0) {
      break;
    }
    step = step0 / std::sqrt(static_cast<double>(k));
    y = exp_map(y, frame * (direction * (step / nd)));
    const double value = max_of(ratios_at(map, lengths, y));
    if (value < best_value) {
      best_value = value;
      best = y;
    }
  }

  // Coordinate polish in the chart at the incumbent.
  double h = step;
  while (h > 1e-13) {
    bool improved = false;
    const Matrix frame = tangent_frame(best);
    for (int axis = 0; axis < best.dimension() && !improved; ++axis) {
      for (const double sign : {1.0, -1.0}) {
        HPoint trial = exp_map(best, frame.col(axis) * (sign * h));
        const double value = max_of(ratios_at(map, lengths, trial));
        if (value < best_value) {
          best_value = value;
          best = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      h *= 0.5;
    }
  }
  return {best, k - 1, h};
}

// Solves the weighted minimax over a growing subset of the constraints: the
// subset optimum is global once no other constraint exceeds its value.
detail::BarrierResult<HPoint> solve_by_constraint_generation(const PartialMap& map,
                                                             const std::vector<double>& weights,
                                                             HPoint start) {
  const std::size_t n = map.size();
  const auto batch = static_cast<std::size_t>(2 * (map.dimension() + 1));
  const HyperbolicSpace space{map.dimension()};
  auto values_at = [&](const HPoint& y) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = distance(y, map.targets[i]);
      v[i] = weights[i] * d * d;
    }
    return v;
  };
  auto by_value = [](const std::vector<double>& v, std::vector<std::size_t> idx) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
  };

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    all[i] = i;
  }
  std::vector<double> vals = values_at(start);
  std::vector<std::size_t> subset = by_value(vals, all);
  subset.resize(std::min(n, batch));
  std::vector<char> in_subset(n, 0);
  for (std::size_t i : subset) {
    in_subset[i] = 1;
  }

  detail::BarrierResult<HPoint> run;
  int total = 0;
  for (;;) {
    std::vector<HPoint> centers;
    std::vector<double> w;
    for (std::size_t i : subset) {
      centers.push_back(map.targets[i]);
      w.push_back(weights[i]);
    }
    run = detail::minimize_weighted_max<HyperbolicSpace, HPoint>(space, centers, w, std::move(start));
    total += run.iterations;
    if (subset.size() == n) {
      break;
    }
    vals = values_at(run.y);
    double level = 0.0;
    for (std::size_t i : subset) {
      level = std::max(level, vals[i]);
    }
    std::vector<std::size_t> violators;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_subset[i] && vals[i] > level * (1.0 + 1e-12)) {
        violators.push_back(i);
      }
    }
    if (violators.empty()) {
      break;
    }
    violators = by_value(vals, violators);
    violators.resize(std::min(violators.size(), batch));
    for (std::size_t i : violators) {
      subset.push_back(i);
      in_subset[i] = 1;
    }
    start = run.y;
  }
  run.iterations = total;
  return run;
}

}  // namespace

void validate(const PartialMap& map, double slack) {
  if (map.sources.empty()) {
    throw std::invalid_argument("PartialMap: needs at least one point");
  }
  if (map.sources.size() != map.targets.size()) {
    throw std::invalid_argument("PartialMap: sources and targets differ in length");
  }
  if (!(map.declared_C > 0.0) || !std::isfinite(map.declared_C)) {
    throw std::invalid_argument("PartialMap: declared_C must be positive");
  }
  const int m = map.dimension();
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map.sources[i].dimension() != m || map.targets[i].dimension() != m) {
      throw std::invalid_argument("PartialMap: mixed dimensions at index " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      const double ds = distance(map.sources[i], map.sources[j]);
      if (ds <= kCoincidence) {
        throw std::invalid_argument("PartialMap: duplicate sources " + std::to_string(i) + ", " +
                                    std::to_string(j));
      }
      const double dt = distance(map.targets[i], map.targets[j]);
      if (dt > map.declared_C * ds + slack) {
        throw std::invalid_argument("PartialMap: pair (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") violates declared_C, ratio " +
                                    std::to_string(dt / ds));
      }
    }
  }
}

double eval_phi(const PartialMap& map, const HPoint& xi, const HPoint& y) {
  if (map.sources.empty()) {
    throw std::invalid_argument("eval_phi: empty map");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double dx = distance(xi, map.sources[i]);
    if (dx <= kCoincidence) {
      throw std::invalid_argument("eval_phi: xi coincides with source " + std::to_string(i));
    }
    best = std::max(best, distance(y, map.targets[i]) / dx);
  }
  return best;
}

OnePointSolution solve_one_point(const PartialMap& map, const HPoint& xi,
                                 const SolverOptions& opts) {
  if (map.sources.empty() || map.sources.size() != map.targets.size()) {
    throw std::invalid_argument("solve_one_point: malformed map");
  }
  if (xi.dimension() != map.dimension()) {
    throw std::invalid_argument("solve_one_point: xi has the wrong dimension");
  }

  OnePointSolution sol;
  sol.xi = xi;
  std::vector<double> lengths(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    lengths[i] = distance(xi, map.sources[i]);
    if (lengths[i] <= kCoincidence) {
      sol.source_index = i;
      sol.eta = map.targets[i];
      sol.c_xi = map.declared_C;
      sol.active_indices = {i};
      sol.hull_weights = {1.0};
      sol.certified = true;
      sol.converged = true;
      return sol;
    }
  }

  if (map.size() == 1 || all_targets_equal(map)) {
    sol.eta = map.targets.front();
    sol.c_xi = 0.0;
    for (std::size_t i = 0; i < map.size(); ++i) {
      sol.active_indices.push_back(i);
      sol.hull_weights.push_back(1.0 / static_cast<double>(map.size()));
    }
    sol.certified = true;
    sol.converged = true;
    return sol;
  }

  HPoint start;
  if (opts.init) {
    start = *opts.init;
  } else {
    const auto nearest = std::min_element(lengths.begin(), lengths.end()) - lengths.begin();
    start = map.targets[static_cast<std::size_t>(nearest)];
  }

  if (opts.method == SolverMethod::kBarrier) {
    std::vector<double> weights(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
      weights[i] = 1.0 / (lengths[i] * lengths[i]);
    }
    auto run = solve_by_constraint_generation(map, weights, std::move(start));
    sol.eta = std::move(run.y);
    sol.c_xi = max_of(ratios_at(map, lengths, sol.eta));
    sol.iterations = run.iterations;
    sol.residual = sol.c_xi > 0.0 ? std::min(run.gap / sol.c_xi, std::sqrt(run.gap))
                                  : std::sqrt(run.gap);
    sol.converged = run.converged && sol.residual <= opts.tol;
  } else {
    auto run = subgradient_descent(map, lengths, std::move(start), opts);
    sol.eta = std::move(run.y);
    sol.c_xi = max_of(ratios_at(map, lengths, sol.eta));
    sol.iterations = run.iterations;
    sol.residual = run.last_step;
    // No stopping test of its own; the hull certificate below decides.
    sol.converged = false;
  }

  const HullCertificate cert = certify_hull(sol, map, opts);
  sol.active_indices = cert.active;
  sol.hull_weights = cert.weights;
  sol.hull_norm = cert.norm;
  sol.certified = cert.pass;
  if (opts.method == SolverMethod::kSubgradient) {
    sol.converged = cert.pass;
  }
  return sol;
}

HullCertificate certify_hull(const OnePointSolution& sol, const PartialMap& map,
                             const SolverOptions& opts) {
  HullCertificate cert;
  cert.tolerance = opts.certificate_tol;
  if (sol.source_index) {
    cert.pass = true;
    cert.active = {*sol.source_index};
    cert.weights = {1.0};
    cert.message = "xi is a source point; eta is its image";
    return cert;
  }
  std::vector<double> lengths(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    lengths[i] = distance(sol.xi, map.sources[i]);
  }
  const std::vector<double> r = ratios_at(map, lengths, sol.eta);
  const double c = max_of(r);
  const double cutoff = c - opts.active_tol * std::max(1.0, c);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] >= cutoff) {
      cert.active.push_back(i);
    }
  }
  if (c <= 0.0) {
    cert.pass = true;
    cert.weights.assign(cert.active.size(), 1.0 / static_cast<double>(cert.active.size()));
    cert.message = "degenerate: all images coincide with eta";
    return cert;
  }

  const int m = map.dimension();
  const Matrix frame = tangent_frame(sol.eta);
  Matrix directions(m, static_cast<Eigen::Index>(cert.active.size()));
  for (std::size_t k = 0; k < cert.active.size(); ++k) {
    Vector v = log_map(sol.eta, map.targets[cert.active[k]]).vec;
    v[0] = -v[0];
    Vector local = frame.transpose() * v;
    directions.col(static_cast<Eigen::Index>(k)) = local / local.norm();
  }
  const Vector lambda = min_norm_convex_weights(directions);
  cert.weights.assign(lambda.data(), lambda.data() + lambda.size());
  cert.norm = (directions * lambda).norm();
  if (cert.active.size() == 1) {
    cert.pass = false;
    cert.message = "minimality violation: single active image";
    return cert;
  }
  cert.pass = cert.norm <= cert.tolerance;
  cert.message = cert.pass ? "eta lies in the convex hull of the active images"
                           : "convex combination of active directions is bounded away from 0";
  return cert;
}

ObtuseChoice obtuse_pair(const OnePointSolution& sol, const PartialMap& map,
                         const HPoint& reference) {
  if (distance(reference, sol.eta) == 0.0) {
    throw std::invalid_argument("obtuse_pair: reference coincides with eta");
  }
  ObtuseChoice best;
  best.angle = -1.0;
  for (std::size_t idx : sol.active_indices) {
    if (distance(map.targets[idx], sol.eta) == 0.0) {
      continue;
    }
    const double a = angle(sol.eta, reference, map.targets[idx]);
    if (a > best.angle) {
      best.angle = a;
      best.index = idx;
    }
  }
  if (best.angle < 0.0) {
    throw std::invalid_argument("obtuse_pair: no active image distinct from eta");
  }
  best.ok = best.angle >= std::numbers::pi / 2.0 - 1e-6;
  return best;
}

PartialMap sequential_extension(const PartialMap& map, std::span<const HPoint> queue,
                                const SolverOptions& opts, std::vector<OnePointSolution>* steps) {
  PartialMap out = map;
  out.sources.reserve(map.size() + queue.size());
  out.targets.reserve(map.size() + queue.size());
  for (const HPoint& xi : queue) {
    OnePointSolution sol = solve_one_point(out, xi, opts);
    if (sol.source_index) {
      throw std::invalid_argument("sequential_extension: queue point coincides with a source");
    }
    out.sources.push_back(xi);
    out.targets.push_back(sol.eta);
    if (steps != nullptr) {
      steps->push_back(std::move(sol));
    }
  }
  if (out.size() >= 2) {
    out.declared_C = lipschitz_constant(out).constant;
  }
  return out;
}

LipschitzWitness lipschitz_constant(std::span<const HPoint> sources,
                                    std::span<const HPoint> targets) {
  if (sources.size() != targets.size()) {
    throw std::invalid_argument("lipschitz_constant: length mismatch");
  }
  if (sources.size() < 2) {
    throw std::invalid_argument("lipschitz_constant: needs at least two points");
  }
  LipschitzWitness w;
  w.constant = -1.0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = i + 1; j < sources.size(); ++j) {
      const double ds = distance(sources[i], sources[j]);
      if (ds <= kCoincidence) {
        throw std::invalid_argument("lipschitz_constant: duplicate sources " + std::to_string(i) +
                                    ", " + std::to_string(j));
      }
      const double ratio = distance(targets[i], targets[j]) / ds;
      if (ratio > w.constant) {
        w = {ratio, i, j};
      }
    }
  }
  return w;
}

LipschitzWitness lipschitz_constant(const PartialMap& map) {
  return lipschitz_constant(map.sources, map.targets);
}

EuclideanSolution solve_euclidean_one_point(std::span<const Vector> sources,
                                            std::span<const Vector> targets, const Vector& xi) {
  if (sources.empty() || sources.size() != targets.size()) {
    throw std::invalid_argument("solve_euclidean_one_point: malformed input");
  }
  std::vector<double> weights(sources.size());
  std::size_t nearest = 0;
  double nearest_d = INFINITY;
  bool same_target = true;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const double d = (sources[i] - xi).norm();
    if (d <= kCoincidence) {
      return {targets[i], 0.0, true};
    }
    if (d < nearest_d) {
      nearest_d = d;
      nearest = i;
    }
    weights[i] = 1.0 / (d * d);
    same_target = same_target && targets[i] == targets.front();
  }
  if (same_target) {
    return {targets.front(), 0.0, true};
  }
  const EuclideanSpace space{static_cast<int>(xi.size())};
  auto run = detail::minimize_weighted_max<EuclideanSpace, Vector>(space, targets, weights,
                                                                   targets[nearest]);
  double c = 0.0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    c = std::max(c, (run.y - targets[i]).norm() / (sources[i] - xi).norm());
  }
  return {std::move(run.y), c, run.converged};
}

}  // namespace hypext
