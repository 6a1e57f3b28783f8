#pragma once

// Optimal one-point extension of a finite Lipschitz map between copies of H^m.
//
// For a new source point xi, the candidate image eta minimizes
//     phi_xi(y) = max_i d(y, f(x_i)) / d(xi, x_i),
// and C_xi = phi_xi(eta). At the minimizer, eta lies in the convex hull of the
// active images, which the solver reports as a numeric certificate.

#include "hypext/geometry.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hypext {

/// Sources closer than this are treated as the same point.
inline constexpr double kCoincidence = 1e-12;

struct PartialMap {
  std::vector<HPoint> sources;
  std::vector<HPoint> targets;
  double declared_C = 1.0;

  std::size_t size() const { return sources.size(); }
  int dimension() const { return sources.empty() ? 0 : sources.front().dimension(); }
};

/// Checks shape, distinct sources and the declared Lipschitz bound (with
/// additive `slack`). Throws std::invalid_argument on the first violation.
void validate(const PartialMap& map, double slack = 1e-9);

enum class SolverMethod {
  kBarrier,     // log-barrier Riemannian Newton (default)
  kSubgradient  // projected geodesic subgradient descent with a chart polish
};

struct SolverOptions {
  double tol = 1e-8;          // bound on phi(eta) - C_xi
  double active_tol = 1e-6;   // ratio_i >= C_xi - active_tol * max(1, C_xi)
  double certificate_tol = 1e-4;
  int max_iters = 100000;     // subgradient iterations
  SolverMethod method = SolverMethod::kBarrier;
  std::optional<HPoint> init; // default: image of the nearest source
};

struct OnePointSolution {
  HPoint xi;
  HPoint eta;
  double c_xi = 0.0;
  std::vector<std::size_t> active_indices;
  std::vector<double> hull_weights;  // aligned with active_indices, sum 1
  double hull_norm = 0.0;
  bool certified = false;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  /// Set when xi coincides with a source; eta is then that source's image.
  std::optional<std::size_t> source_index;
};

double eval_phi(const PartialMap& map, const HPoint& xi, const HPoint& y);

OnePointSolution solve_one_point(const PartialMap& map, const HPoint& xi,
                                 const SolverOptions& opts = {});

struct HullCertificate {
  bool pass = false;
  double norm = 0.0;        // |sum_i lambda_i u_i| over unit directions u_i
  double tolerance = 0.0;
  std::vector<std::size_t> active;
  std::vector<double> weights;
  std::string message;
};

/// Recomputes the active set at sol.eta and checks, by nonnegative least
/// squares, that 0 is (numerically) a convex combination of the unit
/// directions from eta to the active images.
HullCertificate certify_hull(const OnePointSolution& sol, const PartialMap& map,
                             const SolverOptions& opts = {});

struct ObtuseChoice {
  std::size_t index = 0;
  double angle = 0.0;
  bool ok = false;
};

/// An active index j whose image makes an angle >= pi/2 at eta with `reference`.
ObtuseChoice obtuse_pair(const OnePointSolution& sol, const PartialMap& map,
                         const HPoint& reference);

/// Extends `map` over `queue` in order, each new image optimal relative to
/// everything placed so far. declared_C of the result is its empirical constant.
PartialMap sequential_extension(const PartialMap& map, std::span<const HPoint> queue,
                                const SolverOptions& opts = {},
                                std::vector<OnePointSolution>* steps = nullptr);

struct LipschitzWitness {
  double constant = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// Max pairwise distance ratio; ties resolved to the lowest (i, j).
LipschitzWitness lipschitz_constant(std::span<const HPoint> sources,
                                    std::span<const HPoint> targets);
LipschitzWitness lipschitz_constant(const PartialMap& map);

// Euclidean counterpart, used inside tangent charts.

struct EuclideanSolution {
  Vector image;
  double c = 0.0;
  bool converged = false;
};

EuclideanSolution solve_euclidean_one_point(std::span<const Vector> sources,
                                            std::span<const Vector> targets, const Vector& xi);

}  // namespace hypext
