#include "hypext/pipeline.hpp"

#include "hypext/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace hypext {

namespace {

double sinhc(double x) { return x < 1e-8 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }

// Largest x in [lo, hi] with pred(x) true, given pred(lo) true and pred monotone.
template <class Pred>
double bisect_largest(double lo, double hi, Pred pred, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Smallest x in [lo, hi] with pred(x) true, given pred(hi) true and pred monotone.
template <class Pred>
double bisect_smallest(double lo, double hi, Pred pred, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

Vector chart_coords(const HPoint& base, const Matrix& frame, const HPoint& p) {
  Vector v = log_map(base, p).vec;
  v[0] = -v[0];
  return frame.transpose() * v;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& th : pool) {
      th.join();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

Certificate make_cert(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value <= bound};
}

}  // namespace

CertificateError::CertificateError(Certificate c)
    : std::runtime_error("certificate failed: " + c.name + " (" + std::to_string(c.value) +
                         " > " + std::to_string(c.bound) + ")"),
      cert_(std::move(c)) {}

double PipelineConfig::buffer_a() const {
  const double s = epsilon / epsilon0;
  return (c_star + s) / (1.0 - s);
}

double PipelineConfig::buffer_b() const {
  const double s = 2.0 * epsilon / R;
  return ((c_star + delta / R) + s) / (1.0 - s);
}

void PipelineConfig::validate() const {
  if (!(C > 0.0 && C < 1.0)) {
    throw std::invalid_argument("PipelineConfig: C must lie in (0, 1)");
  }
  if (!(c_star >= C && c_star < 1.0)) {
    throw std::invalid_argument("PipelineConfig: C* must lie in [C, 1)");
  }
  if (!(epsilon0 > 0.0) || !(epsilon > 0.0 && epsilon < epsilon0)) {
    throw std::invalid_argument("PipelineConfig: need 0 < epsilon < epsilon0");
  }
  if (!(R > 1.0) || !(R > epsilon)) {
    throw std::invalid_argument("PipelineConfig: need R > 1");
  }
  if (buffer_a() > 1.0) {
    throw std::invalid_argument("PipelineConfig: buffer condition (a) violated");
  }
  if (buffer_b() > 1.0) {
    throw std::invalid_argument("PipelineConfig: buffer condition (b) violated");
  }
}

PipelineConfig choose_parameters(double C) {
  const BoundsReport bounds = compute_c_star(C);
  PipelineConfig cfg;
  cfg.C = C;
  cfg.c_star = bounds.c_star;

  const double budget = 1.0 / std::sqrt(cfg.c_star);
  auto distortion_ok = [budget](double e) { return sinhc(e) * sinhc(e) <= budget; };
  double hi = 1.0;
  while (distortion_ok(hi)) {
    hi *= 2.0;
  }
  cfg.epsilon0 = bisect_largest(0.0, hi, distortion_ok, 1e-10);

  auto buffer_a_ok = [&cfg](double e) {
    PipelineConfig trial = cfg;
    trial.epsilon = e;
    return trial.buffer_a() <= 1.0;
  };
  cfg.epsilon = bisect_largest(0.0, cfg.epsilon0 / 4.0, buffer_a_ok, 1e-10 * cfg.epsilon0);

  auto buffer_b_ok = [&cfg](double r) {
    PipelineConfig trial = cfg;
    trial.R = r;
    return r > 2.0 * cfg.epsilon && trial.buffer_b() <= 1.0;
  };
  double r_hi = 2.0;
  while (!buffer_b_ok(r_hi)) {
    r_hi *= 2.0;
  }
  cfg.R = bisect_smallest(1.0, r_hi, buffer_b_ok, 1e-10);
  if (!(cfg.R > 1.0)) {
    cfg.R = std::nextafter(1.0, 2.0);
  }
  cfg.validate();
  return cfg;
}

std::array<double, 2> chart_distortion_bounds(double epsilon0) {
  const double s = sinhc(epsilon0);
  return {1.0 / (s * s), s * s};
}

PatchResult local_patch(const PartialMap& map, const HPoint& xi, const PipelineConfig& cfg,
                        std::span<const HPoint> ball_sample,
                        const std::optional<OnePointSolution>& center) {
  PatchResult out;
  out.center = center ? *center : solve_one_point(map, xi, cfg.solver);
  const HPoint& eta = out.center.eta;
  out.bound = std::sqrt(cfg.c_star);

  const Matrix source_frame = tangent_frame(xi);
  const Matrix target_frame = tangent_frame(eta);

  std::vector<Vector> chart_src{Vector::Zero(xi.dimension())};
  std::vector<Vector> chart_tgt{Vector::Zero(xi.dimension())};
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (out.center.source_index && *out.center.source_index == i) {
      continue;
    }
    if (distance(xi, map.sources[i]) < cfg.epsilon0) {
      out.nearby_sources.push_back(i);
      chart_src.push_back(chart_coords(xi, source_frame, map.sources[i]));
      chart_tgt.push_back(chart_coords(eta, target_frame, map.targets[i]));
    }
  }

  out.table.label = "patch";
  for (const HPoint& s : ball_sample) {
    if (distance(s, xi) > cfg.epsilon0) {
      throw std::invalid_argument("local_patch: sample point outside B_xi(eps0)");
    }
    out.table.domain.push_back(s);
    if (distance(s, xi) <= kCoincidence) {
      out.table.images.push_back(eta);
      continue;
    }
    const auto same_source = std::find_if(map.sources.begin(), map.sources.end(),
                                          [&](const HPoint& x) { return distance(x, s) <= kCoincidence; });
    if (same_source != map.sources.end()) {
      out.table.images.push_back(map.targets[static_cast<std::size_t>(same_source - map.sources.begin())]);
      continue;
    }
    const Vector p = chart_coords(xi, source_frame, s);
    const EuclideanSolution e = solve_euclidean_one_point(chart_src, chart_tgt, p);
    chart_src.push_back(p);
    chart_tgt.push_back(e.image);
    out.table.images.push_back(exp_map(eta, target_frame * e.image));
  }

  // Certificate over xi, the ball sample and the nearby sources.
  std::vector<HPoint> pts{xi};
  std::vector<HPoint> imgs{eta};
  for (std::size_t k = 0; k < out.table.size(); ++k) {
    const HPoint& s = out.table.domain[k];
    const bool duplicate = std::any_of(pts.begin(), pts.end(),
                                       [&](const HPoint& q) { return distance(q, s) <= kCoincidence; });
    if (!duplicate) {
      pts.push_back(s);
      imgs.push_back(out.table.images[k]);
    }
  }
  for (std::size_t i : out.nearby_sources) {
    const bool duplicate = std::any_of(pts.begin(), pts.end(), [&](const HPoint& q) {
      return distance(q, map.sources[i]) <= kCoincidence;
    });
    if (!duplicate) {
      pts.push_back(map.sources[i]);
      imgs.push_back(map.targets[i]);
    }
  }
  out.lipschitz = pts.size() >= 2 ? lipschitz_constant(pts, imgs).constant : 0.0;
  out.pass = out.lipschitz <= out.bound + cfg.certificate_slack;
  return out;
}

TwoCenterReport verify_two_center_patch(const PartialMap& map, const HPoint& xi,
                                        const HPoint& xi2, const PipelineConfig& cfg,
                                        std::span<const HPoint> samples_one,
                                        std::span<const HPoint> samples_two) {
  const double sep = distance(xi, xi2);
  if (sep < cfg.R * (1.0 - 1e-12)) {
    throw std::invalid_argument("verify_two_center_patch: centers closer than R");
  }
  TwoCenterReport rep;
  const double slack = cfg.certificate_slack;

  auto ball_of = [&](const HPoint& center, std::span<const HPoint> samples) {
    std::vector<HPoint> ball{center};
    for (const HPoint& s : samples) {
      if (distance(s, center) < cfg.epsilon && distance(s, center) > kCoincidence) {
        ball.push_back(s);
      }
    }
    return ball;
  };
  const std::vector<HPoint> ball_one = ball_of(xi, samples_one);
  const std::vector<HPoint> ball_two = ball_of(xi2, samples_two);
  const PatchResult p1 = local_patch(map, xi, cfg, ball_one);
  const PatchResult p2 = local_patch(map, xi2, cfg, ball_two);
  rep.patch_one = p1.lipschitz;
  rep.patch_two = p2.lipschitz;

  // G on X' (label 0) and the two balls (labels 1, 2); ball points that are
  // sources keep label 0.
  std::vector<HPoint> pts = map.sources;
  std::vector<HPoint> imgs = map.targets;
  std::vector<int> label(map.size(), 0);
  auto add_ball = [&](const PatchResult& p, int which) {
    for (std::size_t k = 0; k < p.table.size(); ++k) {
      const HPoint& s = p.table.domain[k];
      const bool is_source = std::any_of(map.sources.begin(), map.sources.end(), [&](const HPoint& x) {
        return distance(x, s) <= kCoincidence;
      });
      if (!is_source) {
        pts.push_back(s);
        imgs.push_back(p.table.images[k]);
        label.push_back(which);
      }
    }
  };
  add_ball(p1, 1);
  add_ball(p2, 2);

  auto case_of = [](int a, int b) {
    if (a > b) {
      std::swap(a, b);
    }
    if (a == b) {
      return a == 0 ? PairCase::kSourceSource : (a == 1 ? PairCase::kBallOne : PairCase::kBallTwo);
    }
    if (a == 0) {
      return b == 1 ? PairCase::kOneSource : PairCase::kTwoSource;
    }
    return PairCase::kOneTwo;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const auto c = static_cast<std::size_t>(case_of(label[i], label[j]));
      const double ratio = distance(imgs[i], imgs[j]) / distance(pts[i], pts[j]);
      ++rep.case_pairs[c];
      if (ratio > rep.case_max[c]) {
        rep.case_max[c] = ratio;
        rep.case_witness[c] = {i, j};
      }
    }
  }

  const double d_eta = distance(p1.center.eta, p2.center.eta);
  rep.eta_ratio = d_eta / sep;
  rep.eta_bound = cfg.c_star + cfg.delta / cfg.R;
  rep.eta_additive = d_eta - cfg.c_star * sep - cfg.delta;

  rep.pass = true;
  for (std::size_t c = 0; c < 6; ++c) {
    if (rep.case_max[c] > 1.0 + slack) {
      rep.pass = false;
      rep.failure = std::string("case ") + kPairCaseNames[c] + " ratio " +
                    std::to_string(rep.case_max[c]) + " at pair (" +
                    std::to_string(rep.case_witness[c][0]) + ", " +
                    std::to_string(rep.case_witness[c][1]) + ")";
      break;
    }
  }
  if (rep.pass && rep.eta_ratio > rep.eta_bound + slack) {
    rep.pass = false;
    rep.failure = "eta-eta' ratio " + std::to_string(rep.eta_ratio) + " exceeds " +
                  std::to_string(rep.eta_bound);
  }
  if (rep.pass && (!p1.pass || !p2.pass)) {
    rep.pass = false;
    rep.failure = "local patch certificate failed";
  }
  for (const OnePointSolution* s : {&p1.center, &p2.center}) {
    if (rep.pass && !s->source_index && s->c_xi > cfg.c_star + slack) {
      rep.pass = false;
      rep.failure = "one-point constant " + std::to_string(s->c_xi) + " exceeds C*";
    }
  }
  return rep;
}

TwoCenterReport verify_two_center_patch(const PartialMap& map, const HPoint& xi,
                                        const HPoint& xi2, const PipelineConfig& cfg) {
  Rng rng_one = make_stream(cfg.seed, 0);
  Rng rng_two = make_stream(cfg.seed, 1);
  const auto count = static_cast<std::size_t>(std::max(cfg.ball_samples, 0));
  const std::vector<HPoint> s1 = sample_ball(xi, cfg.epsilon * (1.0 - 1e-9), count, rng_one);
  const std::vector<HPoint> s2 = sample_ball(xi2, cfg.epsilon * (1.0 - 1e-9), count, rng_two);
  return verify_two_center_patch(map, xi, xi2, cfg, s1, s2);
}

bool ExtensionResult::pass() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const Certificate& c) { return c.pass; });
}

ExtensionResult run_pipeline(const PartialMap& map, std::span<const HPoint> domain_sample,
                             const PipelineConfig& cfg) {
  cfg.validate();
  validate(map);
  if (map.declared_C > cfg.C * (1.0 + 1e-12)) {
    throw std::invalid_argument("run_pipeline: map constant exceeds cfg.C");
  }
  const double slack = cfg.certificate_slack;
  const double root_c_star = std::sqrt(cfg.c_star);

  ExtensionResult res;
  res.c_star = cfg.c_star;
  res.num_sources = map.size();
  res.eval_points = map.sources;
  std::vector<HPoint> sample;
  for (const HPoint& p : domain_sample) {
    const bool clash = std::any_of(res.eval_points.begin(), res.eval_points.end(),
                                   [&](const HPoint& q) { return distance(p, q) <= kCoincidence; });
    if (!clash) {
      res.eval_points.push_back(p);
      sample.push_back(p);
    }
  }
  if (sample.empty()) {
    throw std::invalid_argument("run_pipeline: empty domain sample");
  }
  const std::size_t n_src = map.size();
  const std::size_t n_eval = res.eval_points.size();

  res.net = build_net(sample, cfg.epsilon, cfg.R);
  const Net& net = res.net;
  const std::size_t n_centers = net.centers.size();

  // Balls: eval indices strictly within eps of each center (center included).
  std::vector<std::vector<std::size_t>> ball(n_centers);
  for (std::size_t k = 0; k < n_centers; ++k) {
    for (std::size_t e = 0; e < n_eval; ++e) {
      if (distance(res.eval_points[e], net.centers[k]) < cfg.epsilon) {
        ball[k].push_back(e);
      }
    }
  }

  // One-point solutions and local patches per center.
  std::vector<PatchResult> patches(n_centers);
  parallel_for(n_centers, cfg.threads, [&](std::size_t k) {
    const HPoint& xi = net.centers[k];
    OnePointSolution sol = solve_one_point(map, xi, cfg.solver);
    if (!sol.source_index && sol.c_xi > cfg.c_star + slack) {
      throw CertificateError(make_cert("one-point constant at center " + std::to_string(k),
                                       sol.c_xi, cfg.c_star + slack));
    }
    std::vector<HPoint> pts;
    for (std::size_t e : ball[k]) {
      if (e >= n_src) {
        pts.push_back(res.eval_points[e]);
      }
    }
    patches[k] = local_patch(map, xi, cfg, pts, sol);
    if (!patches[k].pass) {
      throw CertificateError(make_cert("local patch at center " + std::to_string(k),
                                       patches[k].lipschitz, patches[k].bound + slack));
    }
  });

  const auto bins = net.bins();
  std::vector<MapTable> tables(bins.size());
  res.per_bin_constants.assign(bins.size(), 0.0);
  std::vector<double> owning(bins.size(), 0.0);

  parallel_for(bins.size(), cfg.threads, [&](std::size_t j) {
    PartialMap fj = map;
    std::vector<std::size_t> order(n_src);
    for (std::size_t i = 0; i < n_src; ++i) {
      order[i] = i;
    }
    std::vector<char> placed(n_eval, 0);
    std::fill(placed.begin(), placed.begin() + static_cast<std::ptrdiff_t>(n_src), 1);
    for (std::size_t k : bins[j]) {
      const PatchResult& p = patches[k];
      for (std::size_t t = 0; t < p.table.size(); ++t) {
        // Match patch domain points back to eval indices.
        for (std::size_t e : ball[k]) {
          if (e >= n_src && !placed[e] && res.eval_points[e] == p.table.domain[t]) {
            fj.sources.push_back(p.table.domain[t]);
            fj.targets.push_back(p.table.images[t]);
            order.push_back(e);
            placed[e] = 1;
            break;
          }
        }
      }
    }
    if (fj.size() >= 2) {
      const double lip_fj = lipschitz_constant(fj).constant;
      if (lip_fj > 1.0 + slack) {
        throw CertificateError(make_cert("F_" + std::to_string(j) + " before extension", lip_fj,
                                         1.0 + slack));
      }
    }
    std::vector<HPoint> queue;
    for (std::size_t e = n_src; e < n_eval; ++e) {
      if (!placed[e]) {
        queue.push_back(res.eval_points[e]);
        order.push_back(e);
      }
    }
    fj.declared_C = 1.0;
    const PartialMap full = sequential_extension(fj, queue, cfg.solver);

    MapTable table;
    table.label = "F_" + std::to_string(j);
    table.domain = res.eval_points;
    table.images.resize(n_eval);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      table.images[order[pos]] = full.targets[pos];
    }
    const double lip = n_eval >= 2 ? lipschitz_constant(table).constant : 0.0;
    res.per_bin_constants[j] = lip;
    if (lip > 1.0 + slack) {
      throw CertificateError(make_cert("extension of bin " + std::to_string(j), lip, 1.0 + slack));
    }
    for (std::size_t k : bins[j]) {
      const double local = restricted_lipschitz(table, ball[k]);
      owning[j] = std::max(owning[j], local);
      if (local > root_c_star + slack) {
        throw CertificateError(make_cert("bin " + std::to_string(j) + " on ball " +
                                             std::to_string(k),
                                         local, root_c_star + slack));
      }
    }
    tables[j] = std::move(table);
  });
  res.owning_ball_max = *std::max_element(owning.begin(), owning.end());

  const MapTable averaged = average_maps(tables);
  res.images = averaged.images;

  res.agrees_on_sources = true;
  for (std::size_t i = 0; i < n_src; ++i) {
    res.agrees_on_sources = res.agrees_on_sources && res.images[i] == map.targets[i];
  }

  const auto num_bins = static_cast<double>(net.num_bins);
  res.c_prime_empirical = 1.0 - (1.0 - root_c_star) / num_bins;
  res.c_prime_theoretical = 1.0 - (1.0 - root_c_star) / static_cast<double>(net.theoretical_N);

  if (n_eval >= 2) {
    const LipschitzWitness w = lipschitz_constant(averaged);
    res.final_constant = w.constant;
    res.witness_pair = {w.i, w.j};
  }
  for (std::size_t k = 0; k < n_centers; ++k) {
    res.ball_average_max = std::max(res.ball_average_max, restricted_lipschitz(averaged, ball[k]));
  }

  res.certificates.push_back(make_cert("owning bin on its balls <= sqrt(C*)", res.owning_ball_max,
                                       root_c_star + slack));
  res.certificates.push_back(make_cert("F on each ball <= C'_empirical", res.ball_average_max,
                                       res.c_prime_empirical + slack));
  res.certificates.push_back(
      make_cert("final constant <= C'_empirical", res.final_constant, res.c_prime_empirical + slack));
  res.certificates.push_back({"C'_empirical < 1", res.c_prime_empirical, 1.0,
                              res.c_prime_empirical < 1.0});
  res.certificates.push_back({"F agrees with f on X'", res.agrees_on_sources ? 0.0 : 1.0, 0.0,
                              res.agrees_on_sources});
  return res;
}

}  // namespace hypext
