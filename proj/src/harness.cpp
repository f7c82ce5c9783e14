#include "linfeas/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace linfeas {

namespace fs = std::filesystem;

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  ExperimentPlan plan;
  if (!j.contains("problem")) throw std::runtime_error(path + ": plan needs a 'problem' entry");
  const auto& prob = j["problem"];
  if (prob.contains("manifest")) {
    plan.manifest = prob["manifest"].get<std::string>();
  } else if (prob.contains("generate")) {
    const auto& g = prob["generate"];
    GenSpec spec;
    std::string kind = g.value("kind", "gaussian");
    if (kind == "gaussian") spec.kind = GenKind::Gaussian;
    else if (kind == "correlated") spec.kind = GenKind::Correlated;
    else throw std::runtime_error(path + ": unknown generator kind '" + kind + "'");
    spec.m = g.at("m").get<Index>();
    spec.n = g.at("n").get<Index>();
    spec.mix = g.value("mix", 0.5);
    spec.seed = g.value("seed", 0ULL);
    spec.low = g.value("low", 0.9);
    spec.high = g.value("high", 1.0);
    plan.generate = spec;
  } else {
    throw std::runtime_error(path + ": problem entry needs 'manifest' or 'generate'");
  }
  plan.presets = j.value("presets", std::vector<std::string>{"skm"});
  plan.beta_grid = j.value("beta_grid", std::vector<Index>{1});
  plan.delta_grid = j.value("delta_grid", std::vector<double>{1.0});
  if (plan.beta_grid.empty() || plan.delta_grid.empty()) {
    throw std::runtime_error(path + ": beta_grid and delta_grid must be nonempty");
  }
  plan.trials = j.value("trials", Index{1});
  if (plan.trials < 1) throw std::runtime_error(path + ": trials must be >= 1");
  if (j.contains("stopping")) {
    const auto& s = j["stopping"];
    std::string kind = s.value("kind", "iterations");
    if (kind == "residual") plan.stopping.kind = StopKind::PositiveResidualNorm;
    else if (kind == "relmax") plan.stopping.kind = StopKind::RelativeMaxViolation;
    else if (kind == "iterations") plan.stopping.kind = StopKind::Iterations;
    else throw std::runtime_error(path + ": unknown stopping kind '" + kind + "'");
    plan.stopping.epsilon = s.value("epsilon", 0.0);
  }
  plan.max_iters = j.value("max_iters", Index{100000});
  plan.seed = j.value("seed", 0ULL);
  plan.out_dir = j.value("out_dir", std::string("results"));
  plan.wall_time = j.value("wall_time", false);
  plan.trace_every = j.value("trace_every", Index{0});
  plan.x0_scale = j.value("x0_scale", 10.0);
  std::string scaling = j.value("row_scaling", "raw");
  if (scaling == "raw") plan.row_scaling = RowScaling::Raw;
  else if (scaling == "normalized") plan.row_scaling = RowScaling::Normalized;
  else throw std::runtime_error(path + ": unknown row_scaling '" + scaling + "'");
  return plan;
}

Vec far_start_point(const Problem& problem, double base_scale) {
  double r = base_scale;
  for (int i = 0; i < 64; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec x = Vec::Constant(problem.cols(), sign * r);
      if (problem.residual_stats(x).norm2 > 0.0) return x;
    }
    r *= 2.0;
  }
  throw std::runtime_error("far_start_point: could not find a violated scaled all-ones point");
}

SolverConfig resolve_preset(const std::string& label, Index beta, double delta,
                            const std::optional<ConvexityBounds>& bounds) {
  SolverConfig cfg;
  cfg.beta = beta;
  cfg.delta = delta;
  if (label == "skm") {
    cfg.variant = Variant::Skm;
  } else if (label == "gskm-1") {
    cfg.variant = Variant::Gskm;
    cfg.xi = -0.1;
  } else if (label == "gskm-1b") {
    cfg.variant = Variant::Gskm;
    cfg.xi = -0.2;
  } else if (label == "gskm-2") {
    cfg.variant = Variant::Gskm;
    cfg.xi = 0.5;
  } else if (label == "paskm-1" || label == "paskm-2" || label == "paskm-zeta") {
    if (!bounds) {
      throw std::invalid_argument("preset '" + label + "' needs spectral bounds");
    }
    cfg.variant = Variant::Paskm;
    PaskmPreset preset = label == "paskm-1"   ? PaskmPreset::Param1
                         : label == "paskm-2" ? PaskmPreset::Param2
                                              : PaskmPreset::Zeta;
    PaskmParams p = paskm_preset(delta, *bounds, preset);
    cfg.alpha = p.alpha;
    cfg.omega = p.omega;
    cfg.gamma = p.gamma;
  } else {
    throw std::invalid_argument("unknown preset label '" + label + "'");
  }
  return cfg;
}

namespace {

std::string trace_file_name(const TrialRow& row) {
  std::ostringstream name;
  name << row.preset << "_beta" << row.beta << "_delta" << format_double(row.delta) << "_trial"
       << row.trial << ".csv";
  return name.str();
}

bool needs_paskm(const std::vector<std::string>& presets) {
  return std::any_of(presets.begin(), presets.end(),
                     [](const std::string& p) { return p.rfind("paskm", 0) == 0; });
}

bool needs_gskm(const std::vector<std::string>& presets) {
  return std::any_of(presets.begin(), presets.end(),
                     [](const std::string& p) { return p.rfind("gskm", 0) == 0; });
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  Problem problem = plan.manifest ? load_problem(*plan.manifest) : gen_random(*plan.generate).problem;
  ExperimentResult result;
  result.wall_time = plan.wall_time;

  std::optional<SpectralInfo> spectral;
  // PASKM presets need the spectra; for GSKM they only feed the xi-in-Q
  // warning, not worth a large eigendecomposition.
  if (needs_paskm(plan.presets) || (needs_gskm(plan.presets) && problem.cols() <= 2000)) {
    spectral = spectral_summary(problem, plan.row_scaling);
  }
  Vec x0 = far_start_point(problem, plan.x0_scale);

  fs::path traces_dir = fs::path(plan.out_dir) / "traces";
  fs::create_directories(traces_dir);

  for (const std::string& preset : plan.presets) {
    for (double delta : plan.delta_grid) {
      std::optional<ConvexityBounds> bounds;
      for (Index beta : plan.beta_grid) {
        if (spectral) bounds = convexity_bounds(*spectral, problem.rows(), beta, delta);
        SolverConfig cfg = resolve_preset(preset, beta, delta, bounds);
        cfg.stopping = plan.stopping;
        cfg.max_iters = plan.max_iters;
        cfg.trace_every = plan.trace_every;
        if (cfg.variant == Variant::Gskm && bounds &&
            q_membership(cfg.xi, delta, *bounds).region == QRegion::Outside) {
          std::cerr << "warning: preset " << preset << " at delta=" << delta
                    << " has xi outside Q; the run proceeds without a rate guarantee\n";
        }
        for (Index trial = 0; trial < plan.trials; ++trial) {
          cfg.seed = plan.seed + static_cast<std::uint64_t>(trial);
          TrialRow row;
          row.preset = preset;
          row.beta = beta;
          row.delta = delta;
          row.trial = trial;
          try {
            RunResult run = run_solver(problem, cfg, x0);
            row.iterations = run.iterations;
            row.reason = run.reason;
            row.wall_s = run.wall_s;
            row.final_x = std::move(run.state.x);
            row.trace = std::move(run.trace);
            if (!row.trace.empty()) {
              const TraceRecord& last = row.trace.back();
              row.final_residual = last.residual_norm;
              row.final_theta = last.theta;
              row.final_fsc = last.fsc;
            }
            row.trace_path = (traces_dir / trace_file_name(row)).string();
            write_trace_csv(row.trace_path, row, plan.wall_time);
          } catch (const std::exception& e) {
            row.error = e.what();
          }
          result.rows.push_back(std::move(row));
        }
      }
    }
  }

  // Per-trial results table plus recomputable aggregates.
  std::ofstream res(fs::path(plan.out_dir) / "results.csv");
  res << "preset,beta,delta,trial,iterations,stop_reason,final_residual,final_theta,final_fsc,"
         "wall_time_s,trace_path,error\n";
  for (const TrialRow& row : result.rows) {
    std::string error = row.error;
    std::replace(error.begin(), error.end(), ',', ';');
    res << row.preset << "," << row.beta << "," << format_double(row.delta) << "," << row.trial
        << "," << row.iterations << "," << (row.error.empty() ? stop_reason_name(row.reason) : "error")
        << "," << format_double(row.final_residual) << "," << format_double(row.final_theta) << ","
        << format_double(row.final_fsc) << "," << format_double(row.wall_s) << "," << row.trace_path
        << "," << error << "\n";
  }
  res.close();
  emit_traces(result, TraceKind::TimeVsBeta, plan.out_dir);
  return result;
}

void write_trace_csv(const std::string& path, const TrialRow& row, bool wall_time) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace " + path);
  out << "preset,beta,delta,trial,k,time_s,residual,theta,fsc\n";
  for (const TraceRecord& rec : row.trace) {
    out << row.preset << "," << row.beta << "," << format_double(row.delta) << "," << row.trial
        << "," << rec.k << "," << (wall_time ? format_double(rec.time_s) : "0") << ","
        << format_double(rec.residual_norm) << "," << format_double(rec.theta) << ","
        << format_double(rec.fsc) << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

std::string emit_traces(const ExperimentResult& result, TraceKind kind,
                        const std::string& out_dir) {
  fs::create_directories(out_dir);
  // Per-trial wall times are always measured; only the per-iteration time
  // series depend on time-stamped trace rows.
  const bool time_kind = kind == TraceKind::ResidualVsTime || kind == TraceKind::FscVsTime;
  if (time_kind && !result.wall_time) {
    throw std::runtime_error("emit_traces: wall time was not recorded for this experiment");
  }
  for (const TrialRow& row : result.rows) {
    if (!row.error.empty()) continue;
    if (row.trace.empty()) {
      throw std::runtime_error("emit_traces: missing series for cell " + row.preset + " beta=" +
                               std::to_string(row.beta) + " delta=" + format_double(row.delta) +
                               " trial=" + std::to_string(row.trial));
    }
  }

  std::string name;
  switch (kind) {
    case TraceKind::ResidualVsIter: name = "residual_vs_iter.csv"; break;
    case TraceKind::ResidualVsTime: name = "residual_vs_time.csv"; break;
    case TraceKind::FscVsIter: name = "fsc_vs_iter.csv"; break;
    case TraceKind::FscVsTime: name = "fsc_vs_time.csv"; break;
    case TraceKind::TimeVsBeta: name = "time_vs_beta.csv"; break;
  }
  std::string path = (fs::path(out_dir) / name).string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);

  if (kind == TraceKind::TimeVsBeta) {
    out << "preset,beta,delta,trials,mean_iterations,median_iterations,mean_time_s,median_time_s\n";
    // one aggregate row per (preset, beta, delta), in first-seen order
    std::vector<std::tuple<std::string, Index, double>> cells;
    for (const TrialRow& row : result.rows) {
      auto key = std::make_tuple(row.preset, row.beta, row.delta);
      if (std::find(cells.begin(), cells.end(), key) == cells.end()) cells.push_back(key);
    }
    for (const auto& [preset, beta, delta] : cells) {
      std::vector<double> iters, times;
      for (const TrialRow& row : result.rows) {
        if (row.preset == preset && row.beta == beta && row.delta == delta && row.error.empty()) {
          iters.push_back(static_cast<double>(row.iterations));
          times.push_back(row.wall_s);
        }
      }
      double mean_it = 0.0, mean_t = 0.0;
      for (double v : iters) mean_it += v;
      for (double v : times) mean_t += v;
      if (!iters.empty()) {
        mean_it /= static_cast<double>(iters.size());
        mean_t /= static_cast<double>(times.size());
      }
      out << preset << "," << beta << "," << format_double(delta) << "," << iters.size() << ","
          << format_double(mean_it) << "," << format_double(median(iters)) << ","
          << format_double(mean_t) << "," << format_double(median(times)) << "\n";
    }
    return path;
  }

  out << "preset,beta,delta,trial,k,time_s,residual,theta,fsc\n";
  for (const TrialRow& row : result.rows) {
    if (!row.error.empty()) continue;
    for (const TraceRecord& rec : row.trace) {
      out << row.preset << "," << row.beta << "," << format_double(row.delta) << "," << row.trial
          << "," << rec.k << "," << (result.wall_time ? format_double(rec.time_s) : "0") << ","
          << format_double(rec.residual_norm) << "," << format_double(rec.theta) << ","
          << format_double(rec.fsc) << "\n";
    }
  }
  return path;
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::IterationBudget: return "budget";
    case StopReason::FeasibleStart: return "feasible_start";
  }
  return "?";
}

}  // namespace linfeas
