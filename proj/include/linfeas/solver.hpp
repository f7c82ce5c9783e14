#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linfeas/problem.hpp"
#include "linfeas/rng.hpp"
#include "linfeas/sampling.hpp"

namespace linfeas {

enum class Variant { Skm, Gskm, Paskm };

enum class StopKind { PositiveResidualNorm, RelativeMaxViolation, Iterations };

struct StoppingRule {
  StopKind kind = StopKind::Iterations;
  double epsilon = 0.0;
  // Baseline for the relative rule, max(Ax0 - b); captured at run start
  // when absent.
  std::optional<double> reference;
};

struct SolverConfig {
  Variant variant = Variant::Skm;
  double delta = 1.0;
  Index beta = 1;
  double xi = 0.0;                      // GSKM only, (-1, 1]
  double alpha = 0.0, omega = 0.0, gamma = 0.0;  // PASKM only
  StoppingRule stopping;
  Index max_iters = 0;
  std::uint64_t seed = 0;
  double fsc_tol = 0.0;
  Index trace_every = 0;  // 0 = auto: 1 if m*n <= 1e6, else 10
  Index check_every = 1;  // stopping-rule cadence
};

struct TraceRecord {
  Index k = 0;
  double time_s = 0.0;
  double residual_norm = 0.0;
  double theta = 0.0;
  double fsc = 0.0;
};

struct SolverState {
  Index k = 0;
  Vec x;
  std::optional<Vec> z_prev;  // GSKM: z_{k-1}
  std::optional<Vec> v, y;    // PASKM; y = alpha*v + (1-alpha)*x at step entry
  Vec cesaro_sum;             // sum of x_1..x_k (y_1..y_k for PASKM)
  SubsetScratch scratch;
  std::vector<Index> subset;
};

enum class StopReason { Converged, IterationBudget, FeasibleStart };

struct RunResult {
  SolverState state;
  std::vector<TraceRecord> trace;
  StopReason reason = StopReason::IterationBudget;
  Index iterations = 0;
  double wall_s = 0.0;
  double stopping_reference = 0.0;
};

void validate_config(const SolverConfig& cfg, Index m);

SolverState make_state(const Problem& problem, const SolverConfig& cfg, const Vec& x0);

/// One iteration of the configured variant. All variants consume one
/// beta-subset draw per call (none when beta == m); a fully satisfied sample
/// still counts as an iteration.
void solver_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
                 CounterRng& rng);

void skm_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
              CounterRng& rng);
void gskm_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
               CounterRng& rng);
void paskm_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
                CounterRng& rng);

/// Full loop with stopping rule, tracing and timing. Deterministic given
/// (problem, cfg, x0): the trace differs between identical runs only in the
/// measured time_s fields. Throws on non-finite iterates.
RunResult run_solver(const Problem& problem, const SolverConfig& cfg, const Vec& x0);

/// Running Cesaro mean (1/k) sum of the accumulated iterates; k >= 1.
Vec cesaro_average(const SolverState& state);

}  // namespace linfeas
