// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "hypext/averaging.hpp"
#include "hypext/loss_bounds.hpp"
#include "hypext/loss_curve.hpp"
#include "hypext/pipeline.hpp"
#include "hypext/random.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

using namespace hypext;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
  std::ostringstream ss;
  ss << std::setprecision(10) << x;
  return ss.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1. Unit-constant preservation on random instances with declared_C in [1, 3].
Outcome unit_constant() {
  const auto t0 = Clock::now();
  double worst = -INFINITY;
  double worst_sharp = -INFINITY;  // against max(1, empirical Lip f) rather than declared_C
  int uncertified = 0;
  for (int k = 0; k < 200; ++k) {
    Rng rng = make_stream(1001, static_cast<std::uint64_t>(k));
    const int m = k < 100 ? 2 : 3;
    const auto n = static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 8)(rng));
    const double C = std::uniform_real_distribution<double>(1.0, 3.0)(rng);
    const PartialMap map = random_lipschitz_map(m, n, C, rng);
    const HPoint xi = random_challenge_points(map, 2.5, 1, rng).front();
    const OnePointSolution s = solve_one_point(map, xi);
    worst = std::max(worst, s.c_xi - map.declared_C);
    worst_sharp = std::max(worst_sharp, s.c_xi - std::max(1.0, lipschitz_constant(map).constant));
    uncertified += s.certified ? 0 : 1;
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 120.0,
          "max(c_xi - declared_C) = " + num(worst) + ", max(c_xi - max(1, Lip f)) = " + num(worst_sharp) +
              ", uncertified = " + std::to_string(uncertified) + ", " + num(t) + " s"};
}

// 2. Contraction loss bound on C in {0.1, ..., 0.9}.
Outcome contraction_bound() {
  double worst = -INFINITY;
  double max_c_star = 0;
  for (int g = 1; g <= 9; ++g) {
    const double C = 0.1 * g;
    const double cs = compute_c_star(C).c_star;
    max_c_star = std::max(max_c_star, cs);
    if (!(cs < 1 - 1e-6)) {
      return {false, "c_star(" + num(C) + ") = " + num(cs)};
    }
    for (int k = 0; k < 100; ++k) {
      Rng rng = make_stream(2000 + g, static_cast<std::uint64_t>(k));
      const PartialMap map = random_lipschitz_map(2 + k % 2, 3 + k % 6, C, rng);
      const HPoint xi = random_challenge_points(map, 3.0, 1, rng).front();
      worst = std::max(worst, solve_one_point(map, xi).c_xi - cs);
    }
  }
  return {worst <= 1e-6, "max c_star = " + num(max_c_star) + ", max(c_xi - c_star) = " + num(worst)};
}

// 3. Additive defect of the right-angle law of cosines.
Outcome additive_defect() {
  double worst = 0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      worst = std::max(worst, delta_gap(0.05 * i, 0.05 * j));
    }
  }
  const double corner = delta_gap(20, 20);
  const double ln2 = std::numbers::ln2;
  return {worst <= ln2 + 1e-9 && corner >= ln2 - 1e-3,
          "grid max = " + num(worst) + ", corner = " + num(corner)};
}

// 4. Law of cosines against distances of exponential-map triangles.
Outcome law_of_cosines() {
  Rng rng = make_stream(4000, 0);
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> len(0.0, 10.0);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    const int m = 2 + k % 2;
    const HPoint vertex = uniform_in_ball(HPoint::origin(m), 1.0, rng);
    Vector u(m), v(m);
    for (int d = 0; d < m; ++d) u[d] = g(rng), v[d] = g(rng);
    u.normalize();
    v -= v.dot(u) * u;
    v.normalize();
    const double th = theta(rng), l1 = len(rng), l2 = len(rng);
    const auto [a, b] = oracle::triangle_arms(vertex, th, l1, l2, u, v);
    worst = std::max(worst, std::abs(distance(a, b) - d_theta(th, l1, l2)));
  }
  return {worst <= 1e-9, "max error = " + num(worst)};
}

// 5. Homothety constants on B_o(2), c = 0.5.
Outcome homothety() {
  const double c = 0.5, r = 2.0;
  const HomothetyConstants h = homothety_lip_constants(c, r);
  Rng rng = make_stream(5000, 0);
  const HPoint o = HPoint::origin(2);
  std::vector<HPoint> xs;
  for (int k = 0; k < 1000; ++k) xs.push_back(uniform_in_ball(o, r, rng));
  for (int k = 0; k < 1000; ++k) xs.push_back(random_point_at_distance(o, r, rng));
  std::vector<HPoint> hs;
  for (const HPoint& x : xs) hs.push_back(radial_homothety(o, c, x));
  const auto [lo, hi] = oracle::ratio_range(xs, hs);
  const auto [ilo, ihi] = oracle::ratio_range(hs, xs);
  const bool fwd = lo >= h.forward - 1e-9 && lo <= h.forward + 1e-3;
  const bool inv = ihi <= h.inverse + 1e-9 && ihi >= h.inverse - 1e-3;
  (void)ilo;
  return {fwd && inv && hi <= c + 1e-9,
          "min ratio(H) = " + num(lo) + " vs sinh(cr)/sinh(r) = " + num(h.forward) +
              "; max ratio(H^-1) = " + num(ihi) + " vs " + num(h.inverse) +
              "; max ratio(H) = " + num(hi)};
}

// 6. Equilateral triangle, side 2, image side 1.8.
Outcome triangle_loss() {
  const PartialMap tri = triangle_instance(2.0, 0.9);
  const OnePointSolution s = solve_one_point(tri, HPoint::origin(2));
  const double oracle_value = oracle::circumradius(1.8) / oracle::circumradius(2.0);
  const double err = std::abs(s.c_xi - oracle_value);
  return {err <= 1e-5 && s.c_xi - 0.9 >= 4e-3,
          "c_xi = " + num(s.c_xi) + ", oracle = " + num(oracle_value) + ", excess = " + num(s.c_xi - 0.9)};
}

// 7. Restricted-Lipschitz inequality for averages of three maps.
Outcome averaging() {
  double worst = INFINITY;
  for (int k = 0; k < 50; ++k) {
    Rng rng = make_stream(7000, static_cast<std::uint64_t>(k));
    const std::vector<HPoint> dom = sample_ball(HPoint::origin(2), 2.0, 15, rng);
    std::vector<MapTable> fs(3);
    for (int j = 0; j < 3; ++j) {
      fs[j].domain = dom;
      const HPoint center = uniform_in_ball(HPoint::origin(2), 1.0, rng);
      const double spread = 0.5 + j;
      for (std::size_t i = 0; i < dom.size(); ++i) fs[j].images.push_back(uniform_in_ball(center, spread, rng));
    }
    const MapTable avg = average_maps(fs);
    std::vector<std::size_t> idx(dom.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (int z = 0; z < 20; ++z) {
      std::shuffle(idx.begin(), idx.end(), rng);
      const auto size = static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 15)(rng));
      const std::span<const std::size_t> subset(idx.data(), size);
      double rhs = 0;
      for (const MapTable& f : fs) rhs += restricted_lipschitz(f, subset) / 3.0;
      worst = std::min(worst, rhs - restricted_lipschitz(avg, subset));
    }
  }
  return {worst >= -1e-9, "min slack = " + num(worst)};
}

// 8. Two-center patch on seeded admissible configurations.
Outcome two_center() {
  std::array<double, 6> maxima{};
  double eta_excess = -INFINITY;
  int failures = 0;
  std::string first_failure;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng = make_stream(8000, seed);
    const double C = 0.5;
    PipelineConfig cfg = choose_parameters(C);
    cfg.seed = seed;
    const PartialMap map = random_lipschitz_map(2, 5, C, rng);
    const HPoint xi = random_challenge_points(map, 2.0, 1, rng).front();
    const double sep = cfg.R * std::uniform_real_distribution<double>(1.0, 1.5)(rng);
    const HPoint xi2 = random_point_at_distance(xi, sep, rng);
    const TwoCenterReport rep = verify_two_center_patch(map, xi, xi2, cfg);
    for (std::size_t c = 0; c < 6; ++c) maxima[c] = std::max(maxima[c], rep.case_max[c]);
    eta_excess = std::max(eta_excess, rep.eta_ratio - rep.eta_bound);
    if (!rep.pass) {
      ++failures;
      if (first_failure.empty()) first_failure = rep.failure;
    }
  }
  std::string detail = "case maxima";
  for (std::size_t c = 0; c < 6; ++c) detail += std::string(" ") + kPairCaseNames[c] + "=" + num(maxima[c]);
  detail += "; max(eta ratio - bound) = " + num(eta_excess);
  if (failures) detail += "; first failure: " + first_failure;
  const bool cases = std::all_of(maxima.begin(), maxima.end(), [](double v) { return v <= 1 + 1e-6; });
  return {failures == 0 && cases && eta_excess <= 1e-6, detail};
}

// 9. End-to-end run: C = 0.5, 5 sources in B(2), 300 samples of B(3).
Outcome pipeline() {
  const auto t0 = Clock::now();
  Rng rng = make_stream(9000, 0);
  const double C = 0.5;
  const PartialMap map = random_lipschitz_map(2, 5, C, rng);
  const std::vector<HPoint> sample = sample_ball(HPoint::origin(2), 3.0, 300, rng);
  const PipelineConfig cfg = choose_parameters(C);
  ExtensionResult res;
  try {
    res = run_pipeline(map, sample, cfg);
  } catch (const CertificateError& e) {
    return {false, e.what()};
  }
  bool exact = true;
  for (std::size_t i = 0; i < map.size(); ++i) exact = exact && res.images[i] == map.targets[i];
  const double t = seconds_since(t0);
  const bool ok = t < 600 && res.pass() && exact && res.final_constant <= res.c_prime_empirical + 1e-6 &&
                  res.c_prime_empirical < 1.0;
  return {ok, "final = " + num(res.final_constant) + ", C'_emp = " + num(res.c_prime_empirical) +
                  ", bins = " + std::to_string(res.net.num_bins) + ", centers = " +
                  std::to_string(res.net.centers.size()) + ", exact on X' = " + (exact ? "yes" : "no") +
                  ", " + num(t) + " s"};
}

// 10. Log-log slope of 1 - c_star against 1 - C on [0.9, 0.99].
Outcome scaling() {
  std::vector<double> xs, ys;
  for (int k = 0; k <= 9; ++k) {
    const double C = 0.9 + 0.01 * k;
    xs.push_back(std::log(1 - C));
    ys.push_back(std::log(1 - compute_c_star(C).c_star));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope >= 1.5 && slope <= 2.5, "slope = " + num(slope)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"unit Lipschitz constant preserved (200 instances)", unit_constant},
      {"one-point loss below C* for C = 0.1..0.9", contraction_bound},
      {"additive defect bounded by log 2", additive_defect},
      {"law of cosines within 1e-9", law_of_cosines},
      {"homothety constants", homothety},
      {"triangle loss exceeds C", triangle_loss},
      {"averaging inequality on subsets", averaging},
      {"two-center patch", two_center},
      {"end-to-end extension with C' < 1", pipeline},
      {"1 - C* scales like (1 - C)^2", scaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (criteria.size() - failed) << "/" << criteria.size()
            << std::endl;
  return failed ? 1 : 0;
}
