#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linfeas/analysis.hpp"
#include "linfeas/problem.hpp"
#include "linfeas/problems.hpp"
#include "linfeas/solver.hpp"

namespace linfeas {

/// Sweep recipe: problem source, named solver presets and the
/// beta/delta grids, with one shared base seed. Trial t runs every cell with
/// seed base+t so variant comparisons are paired.
struct ExperimentPlan {
  std::optional<std::string> manifest;  // exactly one of manifest/generate
  std::optional<GenSpec> generate;
  std::vector<std::string> presets;     // skm | gskm-1 | gskm-2 | paskm-1 | paskm-2
  std::vector<Index> beta_grid;
  std::vector<double> delta_grid;
  Index trials = 1;
  StoppingRule stopping;
  Index max_iters = 100000;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool wall_time = false;  // real time_s in trace rows (breaks byte-reproducibility)
  Index trace_every = 0;
  double x0_scale = 10.0;
  RowScaling row_scaling = RowScaling::Raw;  // spectra behind PASKM presets
};

struct TrialRow {
  std::string preset;
  Index beta = 0;
  double delta = 0.0;
  Index trial = 0;
  Index iterations = 0;
  StopReason reason = StopReason::IterationBudget;
  double final_residual = 0.0, final_theta = 0.0, final_fsc = 0.0;
  double wall_s = 0.0;
  Vec final_x;  // recorded stopping decisions stay re-verifiable from it
  std::vector<TraceRecord> trace;
  std::string trace_path;
  std::string error;  // nonempty when the cell diverged
};

struct ExperimentResult {
  std::vector<TrialRow> rows;
  bool wall_time = false;
};

enum class TraceKind { ResidualVsIter, ResidualVsTime, FscVsIter, FscVsTime, TimeVsBeta };

ExperimentPlan load_plan(const std::string& path);

/// Default initial point: r * ones with r doubled (both signs tried) until
/// the positive residual is nonzero.
Vec far_start_point(const Problem& problem, double base_scale = 10.0);

/// Resolve a preset label into a solver config for one (beta, delta)
/// cell. PASKM presets need the convexity bounds.
SolverConfig resolve_preset(const std::string& label, Index beta, double delta,
                            const std::optional<ConvexityBounds>& bounds);

ExperimentResult run_experiment(const ExperimentPlan& plan);

/// Tidy per-observation CSV: preset,beta,delta,trial,k,time_s,residual,theta,fsc.
/// time_s is 0 unless the run recorded wall time.
void write_trace_csv(const std::string& path, const TrialRow& row, bool wall_time);

/// Kind-specific emissions into out_dir. Time-based kinds require wall_time.
std::string emit_traces(const ExperimentResult& result, TraceKind kind,
                        const std::string& out_dir);

std::string stop_reason_name(StopReason r);

}  // namespace linfeas
