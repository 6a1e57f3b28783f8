#pragma once

// Global extension of a C-Lipschitz map (C < 1) with a certified constant
// C' < 1: local patches at the centers of an epsilon-net, one 1-Lipschitz
// extension per bin of R-separated centers, and their geodesic average.

#include "hypext/averaging.hpp"
#include "hypext/geometry.hpp"
#include "hypext/loss_bounds.hpp"
#include "hypext/net.hpp"
#include "hypext/one_point.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypext {

struct PipelineConfig {
  double C = 0.5;
  double c_star = 0.0;
  double epsilon0 = 0.0;
  double epsilon = 0.0;
  double R = 0.0;
  double delta = kDelta;
  SolverOptions solver;
  std::uint64_t seed = 1;
  int ball_samples = 16;      // random samples per patch ball (two-center checks)
  unsigned threads = 0;       // 0: hardware concurrency
  double certificate_slack = 1e-6;

  /// (C* + eps/eps0) / (1 - eps/eps0); must be <= 1.
  double buffer_a() const;
  /// ((C* + delta/R) + 2 eps/R) / (1 - 2 eps/R); must be <= 1.
  double buffer_b() const;
  void validate() const;
};

/// Derives C*, eps0, eps and R from C.
///   eps0: largest value with (sinh eps0 / eps0)^2 <= C*^{-1/2}
///   eps:  largest value with buffer_a() <= 1 and eps <= eps0 / 4
///   R:    smallest value > 1 with buffer_b() <= 1
PipelineConfig choose_parameters(double C);

/// Bounds [(e/sinh e)^2, (sinh e/e)^2] on the ratio between tangent-chart and
/// hyperbolic distances for pairs inside a ball of radius e.
std::array<double, 2> chart_distortion_bounds(double epsilon0);

struct Certificate {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

class CertificateError : public std::runtime_error {
 public:
  explicit CertificateError(Certificate c);
  const Certificate& certificate() const { return cert_; }

 private:
  Certificate cert_;
};

struct PatchResult {
  OnePointSolution center;  // xi -> eta
  MapTable table;           // images of the ball sample, same order
  std::vector<std::size_t> nearby_sources;  // sources within eps0 of xi
  double lipschitz = 0.0;   // over ball sample, xi and nearby sources
  double bound = 0.0;       // sqrt(C*)
  bool pass = false;
};

/// Extends f plus {xi -> eta} to `ball_sample` (inside B_xi(eps0)) by
/// Euclidean sequential optimal extension in the tangent charts at xi and eta.
PatchResult local_patch(const PartialMap& map, const HPoint& xi, const PipelineConfig& cfg,
                        std::span<const HPoint> ball_sample,
                        const std::optional<OnePointSolution>& center = std::nullopt);

enum class PairCase { kSourceSource = 0, kBallOne, kBallTwo, kOneSource, kTwoSource, kOneTwo };

inline constexpr std::array<const char*, 6> kPairCaseNames = {
    "(i) X'-X'", "(ii) B-B", "(iii) B'-B'", "(iv) B-X'", "(v) B'-X'", "(vi) B-B'"};

struct TwoCenterReport {
  std::array<double, 6> case_max{};
  std::array<std::array<std::size_t, 2>, 6> case_witness{};
  std::array<std::size_t, 6> case_pairs{};
  double eta_ratio = 0.0;   // d(eta, eta') / d(xi, xi')
  double eta_bound = 0.0;   // C* + delta / R
  double eta_additive = 0.0;  // d(eta, eta') - C* d(xi, xi') - delta, expected <= 0
  double patch_one = 0.0;   // local_patch certificates
  double patch_two = 0.0;
  bool pass = false;
  std::string failure;
};

/// Certifies Lip(f + patch_xi|B(eps) + patch_xi2|B(eps)) <= 1 pairwise, by case.
TwoCenterReport verify_two_center_patch(const PartialMap& map, const HPoint& xi,
                                        const HPoint& xi2, const PipelineConfig& cfg,
                                        std::span<const HPoint> samples_one,
                                        std::span<const HPoint> samples_two);

/// Same, drawing cfg.ball_samples points per ball from cfg.seed.
TwoCenterReport verify_two_center_patch(const PartialMap& map, const HPoint& xi,
                                        const HPoint& xi2, const PipelineConfig& cfg);

struct ExtensionResult {
  std::vector<HPoint> eval_points;  // sources first, then the sample
  std::vector<HPoint> images;
  std::size_t num_sources = 0;
  Net net;
  std::vector<double> per_bin_constants;
  double owning_ball_max = 0.0;  // max over net balls of the owning bin's constant
  double ball_average_max = 0.0; // max over net balls of Lip(F) on the ball
  double final_constant = 0.0;
  double c_prime_empirical = 0.0;
  double c_prime_theoretical = 0.0;
  std::array<std::size_t, 2> witness_pair{};
  double c_star = 0.0;
  bool agrees_on_sources = false;
  std::vector<Certificate> certificates;

  bool pass() const;
};

/// Runs the full construction over `domain_sample`. Stage failures throw
/// CertificateError; final checks are recorded in `certificates`.
ExtensionResult run_pipeline(const PartialMap& map, std::span<const HPoint> domain_sample,
                             const PipelineConfig& cfg);

}  // namespace hypext
