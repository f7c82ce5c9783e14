// Command-line front end: generate, solve, sweep, analyze, certify.
// Exit codes: 0 converged/completed, 2 iteration budget exhausted, 3 input error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "linfeas/analysis.hpp"
#include "linfeas/harness.hpp"
#include "linfeas/problems.hpp"
#include "linfeas/solver.hpp"

namespace {

using namespace linfeas;

RowScaling parse_scaling(const std::string& s) {
  if (s == "raw") return RowScaling::Raw;
  if (s == "normalized") return RowScaling::Normalized;
  throw CLI::ValidationError("--row-scaling must be raw or normalized");
}

int cmd_generate(const std::string& kind, Index m, Index n, double mix, std::uint64_t seed,
                 double low, double high, const std::string& out) {
  GenSpec spec;
  if (kind == "gaussian") spec.kind = GenKind::Gaussian;
  else if (kind == "correlated") spec.kind = GenKind::Correlated;
  else throw std::invalid_argument("--kind must be gaussian or correlated");
  spec.m = m;
  spec.n = n;
  spec.mix = mix;
  spec.seed = seed;
  spec.low = low;
  spec.high = high;
  GeneratedProblem gen = gen_random(spec);
  std::string name = std::filesystem::path(out).stem().string();
  save_problem(gen.problem, out, name, gen.witness());
  nlohmann::json j;
  j["manifest"] = out;
  j["m"] = gen.problem.rows();
  j["n"] = gen.problem.cols();
  j["witness_residual"] = gen.problem.residual_stats(gen.witness()).norm2;
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct SolveArgs {
  std::string problem;
  std::string variant = "skm";
  double delta = 1.0;
  Index beta = 1;
  double xi = 0.0;
  std::optional<double> alpha, omega, gamma;
  std::string preset;
  std::string stop = "residual";
  double eps = 1e-5;
  Index max_iters = 100000;
  std::uint64_t seed = 0;
  std::string trace;
  double fsc_tol = 0.0;
  double x0_scale = 10.0;
  Index trace_every = 0;
  bool wall_time = false;
  std::string row_scaling = "raw";
};

int cmd_solve(const SolveArgs& a) {
  Problem problem = load_problem(a.problem);
  SolverConfig cfg;
  cfg.delta = a.delta;
  cfg.beta = a.beta;
  cfg.seed = a.seed;
  cfg.max_iters = a.max_iters;
  cfg.fsc_tol = a.fsc_tol;
  cfg.trace_every = a.trace_every;
  if (a.stop == "residual") cfg.stopping = {StopKind::PositiveResidualNorm, a.eps, std::nullopt};
  else if (a.stop == "relmax") cfg.stopping = {StopKind::RelativeMaxViolation, a.eps, std::nullopt};
  else if (a.stop == "iterations") cfg.stopping = {StopKind::Iterations, 0.0, std::nullopt};
  else throw std::invalid_argument("--stop must be residual, relmax or iterations");

  if (a.variant == "skm") {
    cfg.variant = Variant::Skm;
  } else if (a.variant == "gskm") {
    cfg.variant = Variant::Gskm;
    cfg.xi = a.xi;
  } else if (a.variant == "paskm") {
    cfg.variant = Variant::Paskm;
    if (!a.preset.empty()) {
      SpectralInfo spectral = spectral_summary(problem, parse_scaling(a.row_scaling));
      ConvexityBounds bounds = convexity_bounds(spectral, problem.rows(), a.beta, a.delta);
      PaskmPreset preset = a.preset == "param1"   ? PaskmPreset::Param1
                           : a.preset == "param2" ? PaskmPreset::Param2
                           : a.preset == "zeta"   ? PaskmPreset::Zeta
                                                  : throw std::invalid_argument(
                                                        "--preset must be param1, param2 or zeta");
      PaskmParams p = paskm_preset(a.delta, bounds, preset);
      cfg.alpha = p.alpha;
      cfg.omega = p.omega;
      cfg.gamma = p.gamma;
    } else if (a.alpha && a.omega && a.gamma) {
      cfg.alpha = *a.alpha;
      cfg.omega = *a.omega;
      cfg.gamma = *a.gamma;
    } else {
      throw std::invalid_argument("paskm needs --preset or all of --alpha --omega --gamma");
    }
  } else {
    throw std::invalid_argument("--variant must be skm, gskm or paskm");
  }

  Vec x0 = far_start_point(problem, a.x0_scale);
  RunResult run = run_solver(problem, cfg, x0);

  if (!a.trace.empty()) {
    TrialRow row;
    row.preset = a.variant;
    row.beta = cfg.beta;
    row.delta = cfg.delta;
    row.trial = 0;
    row.trace = run.trace;
    write_trace_csv(a.trace, row, a.wall_time);
  }
  nlohmann::json j;
  j["variant"] = a.variant;
  j["iterations"] = run.iterations;
  j["stop_reason"] = stop_reason_name(run.reason);
  if (!run.trace.empty()) {
    j["final_residual"] = run.trace.back().residual_norm;
    j["final_theta"] = run.trace.back().theta;
    j["final_fsc"] = run.trace.back().fsc;
  }
  j["wall_s"] = run.wall_s;
  if (cfg.variant == Variant::Paskm) {
    j["alpha"] = cfg.alpha;
    j["omega"] = cfg.omega;
    j["gamma"] = cfg.gamma;
  }
  std::cout << j.dump(2) << "\n";
  bool wanted_convergence = cfg.stopping.kind != StopKind::Iterations;
  if (wanted_convergence && run.reason == StopReason::IterationBudget) return 2;
  return 0;
}

int cmd_analyze(const std::string& problem_path, double delta, Index beta,
                std::optional<double> xi, std::optional<double> alpha, std::optional<double> omega,
                std::optional<double> gamma, const std::string& preset,
                const std::string& row_scaling) {
  Problem problem = load_problem(problem_path);
  SpectralInfo spectral = spectral_summary(problem, parse_scaling(row_scaling));
  ConvexityBounds bounds = convexity_bounds(spectral, problem.rows(), beta, delta);
  RateReport report;
  if (alpha || omega || gamma || !preset.empty()) {
    PaskmParams p;
    if (!preset.empty()) {
      PaskmPreset pp = preset == "param1"   ? PaskmPreset::Param1
                       : preset == "param2" ? PaskmPreset::Param2
                       : preset == "zeta"   ? PaskmPreset::Zeta
                                            : throw std::invalid_argument(
                                                  "--preset must be param1, param2 or zeta");
      p = paskm_preset(delta, bounds, pp);
    } else if (alpha && omega && gamma) {
      p = {*alpha, *omega, *gamma};
    } else {
      throw std::invalid_argument("analyze: give --preset or all of --alpha --omega --gamma");
    }
    report = paskm_rate(p.alpha, p.omega, p.gamma, delta, bounds);
  } else {
    report = gskm_rate(xi.value_or(0.0), delta, bounds);
  }
  nlohmann::json j = nlohmann::json::parse(to_json(report, bounds));
  j["lambda_min_plus"] = spectral.lambda_min_plus;
  j["lambda_max"] = spectral.lambda_max;
  j["frobenius_sq"] = spectral.frobenius_sq;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_certify(const std::string& problem_path, double delta, double xi, Index k,
                const std::string& row_scaling) {
  Problem problem = load_problem(problem_path);
  SpectralInfo spectral = spectral_summary(problem, parse_scaling(row_scaling));
  ConvexityBounds bounds = convexity_bounds(spectral, problem.rows(), 1, delta);
  RateReport rate = gskm_rate(xi, delta, bounds);
  double rho_bar = std::max(rate.rho, rate.rho2 * rate.rho2);
  EncodingLength sigma = encoding_length(problem);
  double psi = problem.max_row_norm();
  nlohmann::json j;
  j["k"] = k;
  j["sigma_ln"] = sigma.sigma_ln;
  j["sigma_log2"] = sigma.sigma_log2;
  j["rho_bar"] = rho_bar;
  j["phi"] = rate.phi;
  j["psi"] = psi;
  j["rate_preconditions_ok"] = rate.preconditions_ok;
  j["using_sigma_ln"] = nlohmann::json::parse(
      to_json(certificate_bounds(sigma.sigma_ln, problem.cols(), rate.phi, rho_bar, k, psi)));
  j["using_sigma_log2"] = nlohmann::json::parse(
      to_json(certificate_bounds(sigma.sigma_log2, problem.cols(), rate.phi, rho_bar, k, psi)));
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized projection solvers for linear feasibility (Ax <= b)"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate a random consistent instance");
  std::string gen_kind = "gaussian", gen_out = "problem.json";
  Index gen_m = 100, gen_n = 10;
  double gen_mix = 0.5, gen_low = 0.9, gen_high = 1.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "gaussian|correlated");
  gen->add_option("--m", gen_m, "rows")->required();
  gen->add_option("--n", gen_n, "cols")->required();
  gen->add_option("--mix", gen_mix, "convex combination coefficient in [0,1]");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--low", gen_low, "correlated range low");
  gen->add_option("--high", gen_high, "correlated range high");
  gen->add_option("--out", gen_out, "output manifest path")->required();

  auto* solve = app.add_subcommand("solve", "Run one solver on a problem manifest");
  SolveArgs sa;
  solve->add_option("--problem", sa.problem, "problem manifest")->required();
  solve->add_option("--variant", sa.variant, "skm|gskm|paskm");
  solve->add_option("--delta", sa.delta, "projection parameter in (0,2]");
  solve->add_option("--beta", sa.beta, "sample size");
  solve->add_option("--xi", sa.xi, "GSKM relaxation in (-1,1]");
  double opt_alpha = 0, opt_omega = 0, opt_gamma = 0;
  auto* oa = solve->add_option("--alpha", opt_alpha, "PASKM alpha");
  auto* oo = solve->add_option("--omega", opt_omega, "PASKM omega");
  auto* og = solve->add_option("--gamma", opt_gamma, "PASKM gamma");
  solve->add_option("--preset", sa.preset, "PASKM preset param1|param2|zeta");
  solve->add_option("--stop", sa.stop, "residual|relmax|iterations");
  solve->add_option("--eps", sa.eps, "stopping tolerance");
  solve->add_option("--max-iters", sa.max_iters, "iteration budget");
  solve->add_option("--seed", sa.seed, "solver seed");
  solve->add_option("--trace", sa.trace, "trace CSV output path");
  solve->add_option("--fsc-tol", sa.fsc_tol, "FSC satisfaction tolerance");
  solve->add_option("--x0-scale", sa.x0_scale, "initial far-point scale");
  solve->add_option("--trace-every", sa.trace_every, "trace cadence (0=auto)");
  solve->add_flag("--wall-time", sa.wall_time,
                  "record measured wall time in trace rows (not byte-reproducible)");
  solve->add_option("--row-scaling", sa.row_scaling, "spectra for presets: raw|normalized");

  auto* sweep = app.add_subcommand("sweep", "Run an experiment plan");
  std::string plan_path;
  sweep->add_option("--plan", plan_path, "plan JSON")->required();

  auto* analyze = app.add_subcommand("analyze", "Theoretical rate report (JSON)");
  std::string an_problem, an_preset, an_scaling = "raw";
  double an_delta = 1.0;
  Index an_beta = 1;
  double an_xi = 0, an_alpha = 0, an_omega = 0, an_gamma = 0;
  analyze->add_option("--problem", an_problem, "problem manifest")->required();
  analyze->add_option("--delta", an_delta, "projection parameter");
  analyze->add_option("--beta", an_beta, "sample size");
  auto* ax = analyze->add_option("--xi", an_xi, "GSKM xi");
  auto* aa = analyze->add_option("--alpha", an_alpha, "PASKM alpha");
  auto* ao = analyze->add_option("--omega", an_omega, "PASKM omega");
  auto* ag = analyze->add_option("--gamma", an_gamma, "PASKM gamma");
  analyze->add_option("--preset", an_preset, "PASKM preset param1|param2|zeta");
  analyze->add_option("--row-scaling", an_scaling, "raw|normalized");

  auto* certify = app.add_subcommand("certify", "Certificate-of-feasibility report (JSON)");
  std::string ct_problem, ct_scaling = "normalized";
  double ct_delta = 1.0, ct_xi = 0.0;
  Index ct_k = 0;
  certify->add_option("--problem", ct_problem, "problem manifest")->required();
  certify->add_option("--delta", ct_delta, "projection parameter");
  certify->add_option("--xi", ct_xi, "GSKM xi");
  certify->add_option("--k", ct_k, "iteration count for the probability bound")->required();
  certify->add_option("--row-scaling", ct_scaling, "raw|normalized");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_kind, gen_m, gen_n, gen_mix, gen_seed, gen_low, gen_high, gen_out);
    }
    if (solve->parsed()) {
      if (oa->count()) sa.alpha = opt_alpha;
      if (oo->count()) sa.omega = opt_omega;
      if (og->count()) sa.gamma = opt_gamma;
      return cmd_solve(sa);
    }
    if (sweep->parsed()) {
      ExperimentPlan plan = load_plan(plan_path);
      ExperimentResult result = run_experiment(plan);
      Index failures = 0;
      for (const auto& row : result.rows) {
        if (!row.error.empty()) ++failures;
      }
      std::cout << "{\"cells\": " << result.rows.size() << ", \"errors\": " << failures
                << ", \"out_dir\": \"" << plan.out_dir << "\"}\n";
      return 0;
    }
    if (analyze->parsed()) {
      return cmd_analyze(an_problem, an_delta, an_beta,
                         ax->count() ? std::optional<double>(an_xi) : std::nullopt,
                         aa->count() ? std::optional<double>(an_alpha) : std::nullopt,
                         ao->count() ? std::optional<double>(an_omega) : std::nullopt,
                         ag->count() ? std::optional<double>(an_gamma) : std::nullopt, an_preset,
                         an_scaling);
    }
    if (certify->parsed()) {
      return cmd_certify(ct_problem, ct_delta, ct_xi, ct_k, ct_scaling);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
