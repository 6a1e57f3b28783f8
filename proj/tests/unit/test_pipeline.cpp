#include "hypext/pipeline.hpp"
#include "hypext/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hypext;

namespace {

PartialMap two_point_map(double C) {
  const HPoint o = HPoint::origin(2);
  Vector u = Vector::Unit(2, 0), v = Vector::Unit(2, 1);
  PartialMap map;
  map.sources = {exp_map(o, from_frame(o, -u)), exp_map(o, from_frame(o, u))};
  map.targets = {exp_map(o, from_frame(o, -C * v)), exp_map(o, from_frame(o, C * v))};
  map.declared_C = C;
  return map;
}

double sinhc(double x) { return std::sinh(x) / x; }

}  // namespace

TEST(ChooseParameters, BufferConditionsHold) {
  const PipelineConfig cfg = choose_parameters(0.5);
  EXPECT_LE(cfg.buffer_a(), 1.0);
  EXPECT_LE(cfg.buffer_b(), 1.0);
  EXPECT_GE(1.0 - cfg.buffer_a(), 0.0);
  EXPECT_LE(cfg.epsilon, cfg.epsilon0 / 4);
  EXPECT_GT(cfg.R, 1.0);
  EXPECT_LE(std::pow(sinhc(cfg.epsilon0), 2), 1 / std::sqrt(cfg.c_star));
  EXPECT_GT(std::pow(sinhc(cfg.epsilon0 + 1e-8), 2), 1 / std::sqrt(cfg.c_star));
  PipelineConfig bigger_R = cfg;
  bigger_R.R = cfg.R - 1e-8;
  EXPECT_GT(bigger_R.buffer_b(), 1.0);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(ChooseParameters, Monotone) {
  double prev_eps0 = INFINITY, prev_R = 0;
  for (int k = 1; k <= 9; ++k) {
    const PipelineConfig cfg = choose_parameters(0.1 * k);
    EXPECT_LT(cfg.epsilon0, prev_eps0);
    EXPECT_GT(cfg.R, prev_R);
    prev_eps0 = cfg.epsilon0;
    prev_R = cfg.R;
  }
}

TEST(ChooseParameters, RGrowsLikeInverseSquare) {
  for (double C = 0.9; C <= 0.99 + 1e-12; C += 0.01) {
    const double scaled = choose_parameters(C).R * (1 - C) * (1 - C);
    EXPECT_GE(scaled, 0.01);
    EXPECT_LE(scaled, 100.0);
  }
}

TEST(PipelineConfig, ValidateRejects) {
  PipelineConfig cfg = choose_parameters(0.5);
  PipelineConfig bad = cfg;
  bad.epsilon = cfg.epsilon0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.R = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.epsilon = 0.9 * cfg.epsilon0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_THROW(choose_parameters(1.0), std::invalid_argument);
}

TEST(ChartDistortion, SampledPairsWithinBounds) {
  const PipelineConfig cfg = choose_parameters(0.5);
  const auto [lo, hi] = chart_distortion_bounds(cfg.epsilon0);
  EXPECT_LT(lo, 1.0);
  EXPECT_GT(hi, 1.0);
  Rng rng = make_stream(71, 0);
  for (int k = 0; k < 20; ++k) {
    const HPoint xi = uniform_in_ball(HPoint::origin(2), 2.0, rng);
    for (int p = 0; p < 50; ++p) {
      const HPoint a = uniform_in_ball(xi, cfg.epsilon0, rng);
      const HPoint b = uniform_in_ball(xi, cfg.epsilon0, rng);
      const double chart = to_frame(xi, log_map(xi, a).vec - log_map(xi, b).vec).norm();
      const double ratio = chart / distance(a, b);
      EXPECT_GE(ratio, lo - 1e-12);
      EXPECT_LE(ratio, hi + 1e-12);
    }
  }
}

TEST(LocalPatch, CenterOnly) {
  const PartialMap map = two_point_map(0.5);
  const PipelineConfig cfg = choose_parameters(0.5);
  Rng rng = make_stream(72, 0);
  const HPoint xi = uniform_in_ball(HPoint::origin(2), 0.5, rng);
  const std::vector<HPoint> ball{xi};
  const PatchResult p = local_patch(map, xi, cfg, ball);
  ASSERT_EQ(p.table.size(), 1u);
  EXPECT_TRUE(p.table.images[0] == solve_one_point(map, xi).eta);
  EXPECT_TRUE(p.pass);
}

TEST(LocalPatch, FarSingleSource) {
  PartialMap map;
  const HPoint o = HPoint::origin(2);
  map.sources = {exp_map(o, from_frame(o, 5.0 * Vector::Unit(2, 0)))};
  map.targets = {o};
  map.declared_C = 0.5;
  const PipelineConfig cfg = choose_parameters(0.5);
  Rng rng = make_stream(73, 0);
  const std::vector<HPoint> ball = sample_ball(o, cfg.epsilon0 * 0.99, 30, rng);
  const PatchResult p = local_patch(map, o, cfg, ball);
  EXPECT_TRUE(p.pass);
  EXPECT_LE(p.lipschitz, std::sqrt(cfg.c_star) + 1e-6);
  EXPECT_TRUE(p.nearby_sources.empty());
}

TEST(LocalPatch, NearbySourcesCertified) {
  Rng rng = make_stream(74, 0);
  const PipelineConfig cfg = choose_parameters(0.5);
  for (int k = 0; k < 10; ++k) {
    InstanceOptions opts;
    opts.source_radius = 0.6;
    const PartialMap map = random_lipschitz_map(2, 5, 0.5, rng, opts);
    const HPoint xi = random_challenge_points(map, 0.3, 1, rng).front();
    std::vector<HPoint> ball{xi};
    for (const HPoint& p : sample_ball(xi, cfg.epsilon0 * 0.99, 20, rng)) ball.push_back(p);
    const PatchResult p = local_patch(map, xi, cfg, ball);
    EXPECT_TRUE(p.pass) << p.lipschitz << " vs " << p.bound;
  }
}

TEST(LocalPatch, RejectsFarSample) {
  const PartialMap map = two_point_map(0.5);
  const PipelineConfig cfg = choose_parameters(0.5);
  const HPoint o = HPoint::origin(2);
  const std::vector<HPoint> ball{exp_map(o, from_frame(o, 2.0 * Vector::Unit(2, 1)))};
  EXPECT_THROW(local_patch(map, o, cfg, ball), std::invalid_argument);
}

TEST(TwoCenter, ExactlyRApart) {
  const PartialMap map = two_point_map(0.5);
  const PipelineConfig cfg = choose_parameters(0.5);
  const HPoint o = HPoint::origin(2);
  const HPoint xi = exp_map(o, from_frame(o, 0.3 * Vector::Unit(2, 1)));
  Rng rng = make_stream(75, 0);
  const HPoint xi2 = random_point_at_distance(xi, cfg.R, rng);
  const TwoCenterReport rep = verify_two_center_patch(map, xi, xi2, cfg);
  EXPECT_TRUE(rep.pass) << rep.failure;
  for (double v : rep.case_max) EXPECT_LE(v, 1.0 + 1e-6);
  EXPECT_LE(rep.eta_ratio, rep.eta_bound + 1e-6);
  EXPECT_LE(rep.eta_additive, 1e-6);
  EXPECT_LE(rep.case_max[1], rep.patch_one + 1e-12);
  EXPECT_LE(rep.case_max[2], rep.patch_two + 1e-12);
}

TEST(TwoCenter, RandomConfigurations) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng = make_stream(76, seed);
    const PartialMap map = random_lipschitz_map(2, 5, 0.5, rng);
    PipelineConfig cfg = choose_parameters(0.5);
    cfg.seed = seed;
    const HPoint xi = random_challenge_points(map, 2.0, 1, rng).front();
    const HPoint xi2 = random_point_at_distance(xi, cfg.R * 1.2, rng);
    const TwoCenterReport rep = verify_two_center_patch(map, xi, xi2, cfg);
    EXPECT_TRUE(rep.pass) << rep.failure;
  }
}

TEST(TwoCenter, TooCloseThrows) {
  const PartialMap map = two_point_map(0.5);
  const PipelineConfig cfg = choose_parameters(0.5);
  Rng rng = make_stream(77, 0);
  const HPoint xi = HPoint::origin(2);
  EXPECT_THROW(verify_two_center_patch(map, xi, random_point_at_distance(xi, cfg.R / 2, rng), cfg),
               std::invalid_argument);
}

TEST(RunPipeline, SingleSourceGivesConstantMap) {
  PartialMap map;
  const HPoint o = HPoint::origin(2);
  map.sources = {o};
  map.targets = {exp_map(o, from_frame(o, Vector::Unit(2, 0)))};
  map.declared_C = 0.5;
  const PipelineConfig cfg = choose_parameters(0.5);
  Rng rng = make_stream(78, 0);
  const std::vector<HPoint> sample = sample_ball(o, 0.5, 30, rng);
  const ExtensionResult res = run_pipeline(map, sample, cfg);
  EXPECT_TRUE(res.pass());
  EXPECT_NEAR(res.final_constant, 0.0, 1e-9);
  EXPECT_TRUE(res.agrees_on_sources);
}

TEST(RunPipeline, TwoPointInstance) {
  const PartialMap map = two_point_map(0.5);
  const PipelineConfig cfg = choose_parameters(0.5);
  Rng rng = make_stream(79, 0);
  const std::vector<HPoint> sample = sample_ball(HPoint::origin(2), 3.0, 200, rng);
  const ExtensionResult res = run_pipeline(map, sample, cfg);
  EXPECT_TRUE(res.pass());
  EXPECT_LE(res.final_constant, res.c_prime_empirical + 1e-6);
  EXPECT_LT(res.c_prime_empirical, 1.0);
  EXPECT_LE(res.c_prime_empirical, res.c_prime_theoretical);
  EXPECT_TRUE(res.images[0] == map.targets[0]);
  EXPECT_TRUE(res.images[1] == map.targets[1]);
  EXPECT_NEAR(res.final_constant, lipschitz_constant(res.eval_points, res.images).constant, 1e-9);
  for (double c : res.per_bin_constants) EXPECT_LE(c, 1.0 + 1e-6);
}

TEST(RunPipeline, DeterministicAcrossThreadCounts) {
  Rng rng = make_stream(80, 0);
  const PartialMap map = random_lipschitz_map(2, 4, 0.5, rng);
  const std::vector<HPoint> sample = sample_ball(HPoint::origin(2), 2.0, 60, rng);
  PipelineConfig one = choose_parameters(0.5);
  one.threads = 1;
  PipelineConfig three = one;
  three.threads = 3;
  const ExtensionResult a = run_pipeline(map, sample, one);
  const ExtensionResult b = run_pipeline(map, sample, three);
  ASSERT_EQ(a.images.size(), b.images.size());
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    EXPECT_TRUE(a.images[i] == b.images[i]);
  }
  EXPECT_EQ(a.final_constant, b.final_constant);
}

TEST(RunPipeline, RejectsMapAboveC) {
  const PartialMap map = two_point_map(0.7);
  const PipelineConfig cfg = choose_parameters(0.5);
  Rng rng = make_stream(81, 0);
  EXPECT_THROW(run_pipeline(map, sample_ball(HPoint::origin(2), 1.0, 5, rng), cfg),
               std::invalid_argument);
}
