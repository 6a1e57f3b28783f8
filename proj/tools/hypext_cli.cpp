// hypext command-line front end. Exit codes: 0 all certificates pass,
// 1 some certificate failed, 2 bad input.

#include "hypext/instance_io.hpp"
#include "hypext/loss_bounds.hpp"
#include "hypext/loss_curve.hpp"
#include "hypext/net.hpp"
#include "hypext/pipeline.hpp"
#include "hypext/random.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace hypext;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kBadInput = 2;

// "0.1,0.2,0.5" or "start:stop:step" (inclusive).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::istringstream ss(text);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c);
    const double start = std::stod(a);
    const double stop = std::stod(b);
    const double step = std::stod(c);
    if (!(step > 0.0)) {
      throw std::invalid_argument("grid step must be positive");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) {
      out.push_back(start + static_cast<double>(k) * step);
    }
    return out;
  }
  std::istringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) {
      out.push_back(std::stod(item));
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("empty grid");
  }
  return out;
}

SolverOptions solver_from(const KeyValues& kv, SolverOptions opts = {}) {
  if (auto v = kv.number("tol")) opts.tol = *v;
  if (auto v = kv.integer("max_iters")) opts.max_iters = static_cast<int>(*v);
  if (auto v = kv.number("certificate_tol")) opts.certificate_tol = *v;
  if (auto v = kv.text("method")) {
    if (*v == "barrier") {
      opts.method = SolverMethod::kBarrier;
    } else if (*v == "subgradient") {
      opts.method = SolverMethod::kSubgradient;
    } else {
      throw FormatError("unknown solver method '" + *v + "'");
    }
  }
  return opts;
}

PipelineConfig config_from(const KeyValues& kv, double default_C) {
  PipelineConfig cfg = choose_parameters(kv.number("C").value_or(default_C));
  if (auto v = kv.number("epsilon0")) cfg.epsilon0 = *v;
  if (auto v = kv.number("epsilon")) cfg.epsilon = *v;
  if (auto v = kv.number("R")) cfg.R = *v;
  if (auto v = kv.integer("seed")) cfg.seed = static_cast<std::uint64_t>(*v);
  if (auto v = kv.integer("ball_samples")) cfg.ball_samples = static_cast<int>(*v);
  if (auto v = kv.integer("threads")) cfg.threads = static_cast<unsigned>(*v);
  if (auto v = kv.number("certificate_slack")) cfg.certificate_slack = *v;
  cfg.solver = solver_from(kv, cfg.solver);
  cfg.validate();
  return cfg;
}

void print_config(std::ostream& out, const PipelineConfig& cfg) {
  out << "C = " << format_double(cfg.C) << "\n"
      << "c_star = " << format_double(cfg.c_star) << "\n"
      << "epsilon0 = " << format_double(cfg.epsilon0) << "\n"
      << "epsilon = " << format_double(cfg.epsilon) << "\n"
      << "R = " << format_double(cfg.R) << "\n"
      << "buffer_a = " << format_double(cfg.buffer_a()) << "\n"
      << "buffer_b = " << format_double(cfg.buffer_b()) << "\n";
}

void print_certificate(std::ostream& out, const Certificate& c) {
  out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.value)
      << " <= " << format_double(c.bound) << "\n";
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") {
    return std::cout;
  }
  file.open(path);
  if (!file) {
    throw FormatError("cannot write " + path);
  }
  return file;
}

int cmd_solve(const std::string& path, const SolverOptions& opts) {
  const Instance inst = load_instance(path);
  validate(inst.map);
  if (inst.queries.empty()) {
    throw FormatError("instance has no queries");
  }
  const int m = inst.map.dimension();
  std::vector<std::string> header{"query", "c_xi", "hull_norm", "certified", "converged",
                                  "iterations"};
  for (int k = 0; k <= m; ++k) {
    header.push_back("eta_" + std::to_string(k));
  }
  write_csv_row(std::cout, header);
  bool ok = true;
  for (std::size_t q = 0; q < inst.queries.size(); ++q) {
    const OnePointSolution s = solve_one_point(inst.map, inst.queries[q], opts);
    const bool pass = s.certified && s.c_xi <= inst.map.declared_C + 1e-6;
    ok = ok && pass;
    std::vector<std::string> row{std::to_string(q), csv_cell(s.c_xi), csv_cell(s.hull_norm),
                                 s.certified ? "1" : "0", s.converged ? "1" : "0",
                                 std::to_string(s.iterations)};
    for (int k = 0; k <= m; ++k) {
      row.push_back(csv_cell(s.eta[k]));
    }
    write_csv_row(std::cout, row);
  }
  std::cerr << (ok ? "PASS" : "FAIL") << " solve-one-point: " << inst.queries.size()
            << " queries\n";
  return ok ? kPass : kFail;
}

int cmd_bounds(const std::vector<double>& grid, const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  write_csv_row(out, {"C", "r_star", "c_hat", "arcsinh_value", "c_star"});
  bool ok = true;
  for (double C : grid) {
    const BoundsReport b = compute_c_star(C);
    ok = ok && b.c_star < 1.0 - 1e-6 && b.c_star >= C;
    write_csv_row(out, {csv_cell(b.C), csv_cell(b.r_star), csv_cell(b.c_hat),
                        csv_cell(b.arcsinh_value), csv_cell(b.c_star)});
  }
  return ok ? kPass : kFail;
}

int cmd_net(const std::string& path, double epsilon, double R, const std::string& out_path) {
  const std::vector<HPoint> sample = load_points(path);
  const Net net = build_net(sample, epsilon, R);
  std::ofstream file;
  write_net(open_out(out_path, file), net);
  return kPass;
}

int cmd_two_center(const std::string& path, const std::string& config_path) {
  const Instance inst = load_instance(path);
  validate(inst.map);
  const KeyValues kv = config_path.empty() ? KeyValues{} : KeyValues::load(config_path);
  const PipelineConfig cfg = config_from(kv, inst.map.declared_C);
  print_config(std::cout, cfg);

  HPoint xi, xi2;
  if (inst.queries.size() >= 2) {
    xi = inst.queries[0];
    xi2 = inst.queries[1];
  } else {
    Rng rng = make_stream(cfg.seed, 2);
    xi = inst.queries.empty() ? uniform_in_ball(HPoint::origin(inst.map.dimension()), 2.0, rng)
                              : inst.queries[0];
    xi2 = random_point_at_distance(xi, cfg.R, rng);
  }
  const TwoCenterReport rep = verify_two_center_patch(inst.map, xi, xi2, cfg);
  std::cout << "separation = " << format_double(distance(xi, xi2)) << "\n";
  for (std::size_t c = 0; c < 6; ++c) {
    std::cout << "case " << kPairCaseNames[c] << ": max " << format_double(rep.case_max[c])
              << " over " << rep.case_pairs[c] << " pairs\n";
  }
  std::cout << "eta ratio = " << format_double(rep.eta_ratio)
            << " (bound " << format_double(rep.eta_bound) << ")\n";
  std::cout << "eta additive = " << format_double(rep.eta_additive) << "\n";
  std::cout << "patch constants = " << format_double(rep.patch_one) << ", "
            << format_double(rep.patch_two) << "\n";
  std::cout << (rep.pass ? "PASS" : "FAIL " + rep.failure) << "\n";
  return rep.pass ? kPass : kFail;
}

int cmd_pipeline(const std::string& path, const std::string& config_path,
                 const std::string& out_path) {
  const Instance inst = load_instance(path);
  const KeyValues kv = config_path.empty() ? KeyValues{} : KeyValues::load(config_path);
  const PipelineConfig cfg = config_from(kv, inst.map.declared_C);
  print_config(std::cout, cfg);

  std::vector<HPoint> sample = inst.queries;
  if (sample.empty()) {
    Rng rng = make_stream(cfg.seed, 3);
    const auto count = static_cast<std::size_t>(kv.integer("sample_count").value_or(300));
    const double radius = kv.number("sample_radius").value_or(3.0);
    sample = sample_ball(HPoint::origin(inst.map.dimension()), radius, count, rng);
  }

  ExtensionResult res;
  try {
    res = run_pipeline(inst.map, sample, cfg);
  } catch (const CertificateError& e) {
    std::cout << "stage failure\n";
    print_certificate(std::cout, e.certificate());
    return kFail;
  }
  std::cout << "centers = " << res.net.centers.size() << "\n"
            << "num_bins = " << res.net.num_bins << "\n"
            << "theoretical_N = " << res.net.theoretical_N << "\n"
            << "final_constant = " << format_double(res.final_constant) << "\n"
            << "witness_pair = " << res.witness_pair[0] << " " << res.witness_pair[1] << "\n"
            << "c_prime_empirical = " << format_double(res.c_prime_empirical) << "\n"
            << "c_prime_theoretical = " << format_double(res.c_prime_theoretical) << "\n";
  for (const Certificate& c : res.certificates) {
    print_certificate(std::cout, c);
  }

  if (!out_path.empty()) {
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    const int m = inst.map.dimension();
    std::vector<std::string> header{"index", "role"};
    for (int k = 0; k <= m; ++k) header.push_back("x_" + std::to_string(k));
    for (int k = 0; k <= m; ++k) header.push_back("F_" + std::to_string(k));
    write_csv_row(out, header);
    for (std::size_t i = 0; i < res.eval_points.size(); ++i) {
      std::vector<std::string> row{std::to_string(i), i < res.num_sources ? "source" : "sample"};
      for (int k = 0; k <= m; ++k) row.push_back(csv_cell(res.eval_points[i][k]));
      for (int k = 0; k <= m; ++k) row.push_back(csv_cell(res.images[i][k]));
      write_csv_row(out, row);
    }
  }
  return res.pass() ? kPass : kFail;
}

int cmd_loss_curve(const std::vector<double>& grid, int trials, std::uint64_t seed,
                   const std::string& out_path) {
  const std::vector<LossCurveRow> rows = loss_curve(grid, trials, seed);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  write_csv_row(out, {"C", "trials", "lower_bound", "random_max_c_xi", "triangle_c_xi", "c_star",
                      "c_prime_empirical", "num_bins"});
  bool ok = true;
  for (const LossCurveRow& r : rows) {
    ok = ok && r.lower_bound >= r.C - 1e-9 && r.lower_bound <= r.c_star + 1e-6;
    write_csv_row(out, {csv_cell(r.C), std::to_string(r.trials), csv_cell(r.lower_bound),
                        csv_cell(r.random_max_c_xi), csv_cell(r.triangle_c_xi), csv_cell(r.c_star),
                        csv_cell(r.c_prime_empirical), std::to_string(r.num_bins)});
  }
  return ok ? kPass : kFail;
}

int cmd_random_instance(int dim, std::size_t n, double C, std::size_t queries, double radius,
                        std::uint64_t seed, const std::string& out_path) {
  Rng rng = make_stream(seed, 0);
  Instance inst;
  inst.map = random_lipschitz_map(dim, n, C, rng);
  inst.queries = random_challenge_points(inst.map, radius, queries, rng);
  std::ofstream file;
  write_instance(open_out(out_path, file), inst);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz extension in hyperbolic space"};
  app.require_subcommand(1);

  std::string instance, config, out, sample_path, grid_text = "0.1:0.9:0.1";
  SolverOptions solver;
  double epsilon = 0.0, R = 0.0;
  int trials = 10;
  std::uint64_t seed = 1;
  std::string method = "barrier";

  auto* solve = app.add_subcommand("solve-one-point", "Optimal image of each query point");
  solve->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--tol", solver.tol, "Solver tolerance");
  solve->add_option("--max-iters", solver.max_iters, "Iteration cap");
  solve->add_option("--method", method, "barrier or subgradient")
      ->check(CLI::IsMember({"barrier", "subgradient"}));

  auto* bounds = app.add_subcommand("verify-bounds", "Tabulate C* over a grid of C");
  bounds->add_option("--c-grid", grid_text, "List a,b,c or range start:stop:step");
  bounds->add_option("--out", out, "CSV output (default stdout)");

  auto* net = app.add_subcommand("net", "Greedy epsilon-net and R-bins of a point sample");
  net->add_option("sample", sample_path, "Points file")->required()->check(CLI::ExistingFile);
  net->add_option("--epsilon", epsilon, "Net radius")->required();
  net->add_option("--R", R, "Bin separation")->required();
  net->add_option("--out", out, "Output file (default stdout)");

  auto* two = app.add_subcommand("two-center", "Certify the two-center patch");
  two->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  two->add_option("--config", config, "key = value config")->check(CLI::ExistingFile);

  auto* pipe = app.add_subcommand("pipeline", "Full extension with certificates");
  pipe->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  pipe->add_option("--config", config, "key = value config")->check(CLI::ExistingFile);
  pipe->add_option("--out", out, "CSV of evaluation points and images");

  auto* curve = app.add_subcommand("loss-curve", "Empirical loss lower bounds");
  curve->add_option("--c-grid", grid_text, "List a,b,c or range start:stop:step");
  curve->add_option("--trials", trials, "Random instances per C")->check(CLI::PositiveNumber);
  curve->add_option("--seed", seed, "Random seed");
  curve->add_option("--out", out, "CSV output (default stdout)");

  int dim = 2;
  std::size_t n_sources = 5, n_queries = 0;
  double declared = 0.5, radius = 3.0;
  auto* gen = app.add_subcommand("random-instance", "Write a seeded random C-Lipschitz instance");
  gen->add_option("--dim", dim, "Dimension m")->check(CLI::PositiveNumber);
  gen->add_option("--n", n_sources, "Number of sources")->check(CLI::PositiveNumber);
  gen->add_option("--C", declared, "Lipschitz bound")->check(CLI::PositiveNumber);
  gen->add_option("--queries", n_queries, "Query points drawn from B_o(radius)");
  gen->add_option("--radius", radius, "Query radius");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      solver.method = method == "barrier" ? SolverMethod::kBarrier : SolverMethod::kSubgradient;
      return cmd_solve(instance, solver);
    }
    if (*bounds) return cmd_bounds(parse_grid(grid_text), out);
    if (*net) return cmd_net(sample_path, epsilon, R, out);
    if (*two) return cmd_two_center(instance, config);
    if (*pipe) return cmd_pipeline(instance, config, out);
    if (*gen) return cmd_random_instance(dim, n_sources, declared, n_queries, radius, seed, out);
    if (*curve) return cmd_loss_curve(parse_grid(grid_text), trials, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
