#include "linfeas/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace linfeas {

void validate_config(const SolverConfig& cfg, Index m) {
  if (!(cfg.delta > 0.0 && cfg.delta <= 2.0)) {
    throw std::invalid_argument("SolverConfig: delta must be in (0, 2]");
  }
  if (cfg.beta < 1 || cfg.beta > m) {
    throw std::invalid_argument("SolverConfig: beta must satisfy 1 <= beta <= m");
  }
  if (cfg.variant == Variant::Gskm && !(cfg.xi > -1.0 && cfg.xi <= 1.0)) {
    throw std::invalid_argument("SolverConfig: xi must be in (-1, 1]");
  }
  if (cfg.variant == Variant::Paskm) {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
      throw std::invalid_argument("SolverConfig: alpha must be in [0, 1]");
    }
    if (!(cfg.omega >= 0.0 && cfg.omega <= 1.0)) {
      throw std::invalid_argument("SolverConfig: omega must be in [0, 1]");
    }
    if (!(cfg.gamma >= 0.0)) {
      throw std::invalid_argument("SolverConfig: gamma must be >= 0");
    }
  }
  if (cfg.stopping.kind != StopKind::Iterations && !(cfg.stopping.epsilon > 0.0)) {
    throw std::invalid_argument("SolverConfig: epsilon must be positive for residual rules");
  }
  if (cfg.max_iters < 0) throw std::invalid_argument("SolverConfig: max_iters < 0");
}

SolverState make_state(const Problem& problem, const SolverConfig& cfg, const Vec& x0) {
  if (x0.size() != problem.cols()) {
    throw std::invalid_argument("make_state: x0 dimension mismatch");
  }
  SolverState s;
  s.x = x0;
  s.cesaro_sum = Vec::Zero(problem.cols());
  if (cfg.variant == Variant::Paskm) {
    s.v = x0;
    s.y = x0;  // y_0 = alpha*v_0 + (1-alpha)*x_0 = x_0
  }
  return s;
}

namespace {

// Shared sampling + selection for one step, evaluated at `point`.
SampleSelection draw_and_select(const Problem& problem, SolverState& state,
                                const SolverConfig& cfg, CounterRng& rng, const Vec& point) {
  sample_subset(state.scratch, problem.rows(), cfg.beta, rng, state.subset);
  return select_max_violated(problem, point, state.subset);
}

}  // namespace

void skm_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
              CounterRng& rng) {
  SampleSelection sel = draw_and_select(problem, state, cfg, rng, state.x);
  if (sel.chosen) {
    double c = -cfg.delta * sel.violation / problem.row_norm_sq(*sel.chosen);
    problem.add_scaled_row(*sel.chosen, c, state.x);
  }
  ++state.k;
  state.cesaro_sum += state.x;
}

void gskm_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
               CounterRng& rng) {
  SampleSelection sel = draw_and_select(problem, state, cfg, rng, state.x);
  Vec z = state.x;
  if (sel.chosen) {
    double c = -cfg.delta * sel.violation / problem.row_norm_sq(*sel.chosen);
    problem.add_scaled_row(*sel.chosen, c, z);
  }
  // First step bootstraps z_{k-1} := z_k, so x_2 = z_1 exactly.
  if (!state.z_prev) state.z_prev = z;
  state.x = (1.0 - cfg.xi) * z + cfg.xi * (*state.z_prev);
  *state.z_prev = std::move(z);
  ++state.k;
  state.cesaro_sum += state.x;
}

void paskm_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
                CounterRng& rng) {
  Vec& y = *state.y;  // y_k, maintained by the previous step
  SampleSelection sel = draw_and_select(problem, state, cfg, rng, y);
  Vec& v = *state.v;
  state.x = y;
  v = cfg.omega * v + (1.0 - cfg.omega) * y;
  if (sel.chosen) {
    double step = sel.violation / problem.row_norm_sq(*sel.chosen);
    problem.add_scaled_row(*sel.chosen, -cfg.delta * step, state.x);
    problem.add_scaled_row(*sel.chosen, -cfg.gamma * step, v);
  }
  y = cfg.alpha * v + (1.0 - cfg.alpha) * state.x;  // y_{k+1}
  ++state.k;
  state.cesaro_sum += y;
}

void solver_step(const Problem& problem, SolverState& state, const SolverConfig& cfg,
                 CounterRng& rng) {
  switch (cfg.variant) {
    case Variant::Skm: skm_step(problem, state, cfg, rng); break;
    case Variant::Gskm: gskm_step(problem, state, cfg, rng); break;
    case Variant::Paskm: paskm_step(problem, state, cfg, rng); break;
  }
}

namespace {

bool rule_satisfied(const StoppingRule& rule, const ResidualStats& stats, double reference) {
  switch (rule.kind) {
    case StopKind::PositiveResidualNorm: return stats.norm2 <= rule.epsilon;
    case StopKind::RelativeMaxViolation: return stats.max_raw <= rule.epsilon * reference;
    case StopKind::Iterations: return false;
  }
  return false;
}

}  // namespace

RunResult run_solver(const Problem& problem, const SolverConfig& cfg, const Vec& x0) {
  validate_config(cfg, problem.rows());
  Index trace_every = cfg.trace_every;
  if (trace_every <= 0) {
    trace_every = (static_cast<double>(problem.rows()) * static_cast<double>(problem.cols()) <= 1e6)
                      ? 1 : 10;
  }
  Index check_every = cfg.check_every > 0 ? cfg.check_every : 1;

  RunResult out;
  out.state = make_state(problem, cfg, x0);
  CounterRng rng(cfg.seed);

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  ResidualStats stats = problem.residual_stats(x0, cfg.fsc_tol);
  out.stopping_reference = cfg.stopping.reference.value_or(stats.max_raw);
  out.trace.push_back({0, elapsed(), stats.norm2, stats.theta, stats.fsc});

  if (cfg.stopping.kind != StopKind::Iterations && rule_satisfied(cfg.stopping, stats, out.stopping_reference)) {
    out.reason = StopReason::FeasibleStart;
    out.wall_s = elapsed();
    return out;
  }

  out.reason = StopReason::IterationBudget;
  for (Index k = 1; k <= cfg.max_iters; ++k) {
    solver_step(problem, out.state, cfg, rng);
    bool check_due = cfg.stopping.kind != StopKind::Iterations && (k % check_every == 0);
    bool trace_due = (k % trace_every == 0) || k == cfg.max_iters;
    if (!check_due && !trace_due) continue;

    stats = problem.residual_stats(out.state.x, cfg.fsc_tol);
    if (!out.state.x.allFinite()) {
      throw std::runtime_error("run_solver: non-finite iterate at k=" + std::to_string(k) +
                               " (residual " + std::to_string(stats.norm2) + "); divergence");
    }
    bool stop = check_due && rule_satisfied(cfg.stopping, stats, out.stopping_reference);
    if (trace_due || stop) {
      out.trace.push_back({k, elapsed(), stats.norm2, stats.theta, stats.fsc});
    }
    if (stop) {
      out.reason = StopReason::Converged;
      break;
    }
  }
  out.iterations = out.state.k;
  out.wall_s = elapsed();
  return out;
}

Vec cesaro_average(const SolverState& state) {
  if (state.k < 1) throw std::invalid_argument("cesaro_average: k must be >= 1");
  return state.cesaro_sum / static_cast<double>(state.k);
}

}  // namespace linfeas
