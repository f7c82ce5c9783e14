// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each check pins its tolerance in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <vector>

#include "linfeas/analysis.hpp"
#include "linfeas/harness.hpp"
#include "linfeas/problems.hpp"
#include "linfeas/sampling.hpp"
#include "linfeas/solver.hpp"

using namespace linfeas;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " — "
            << detail << " (" << seconds << " s)\n";
  if (!pass) ++g_failures;
}

template <typename F>
void run(int id, const std::string& name, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, pass, detail, seconds);
}

Problem random_problem(Index m, Index n, CounterRng& rng) {
  RowMatrix A(m, n);
  Vec b(m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = rng.normal();
    b[i] = rng.normal();
  }
  return Problem::dense(A, b);
}

Problem box_problem(Index n) {
  RowMatrix A(2 * n, n);
  A.topRows(n) = RowMatrix::Identity(n, n);
  A.bottomRows(n) = -RowMatrix::Identity(n, n);
  Vec b(2 * n);
  b.head(n).setConstant(1.0);
  b.tail(n).setConstant(0.0);
  return Problem::dense(A, b);
}

Problem gaussian_instance(Index m, Index n, std::uint64_t seed) {
  GenSpec spec;
  spec.m = m;
  spec.n = n;
  spec.seed = seed;
  return gen_random(spec).problem;
}

bool criterion1(std::string& detail) {
  CounterRng rng(101);
  double worst = 0.0;
  for (Index m = 1; m <= 8; ++m) {
    Problem p = random_problem(m, 3, rng);
    for (Index beta = 1; beta <= m; ++beta) {
      for (int t = 0; t < 20; ++t) {
        Vec x(3);
        for (Index j = 0; j < 3; ++j) x[j] = 2.5 * rng.normal();
        double exact = expected_loss_exact(p, x, beta);
        double brute = expected_loss_bruteforce(p, x, beta);
        double err = std::abs(exact - brute) / std::max(1.0, std::abs(brute));
        worst = std::max(worst, err);
      }
    }
  }
  std::ostringstream ss;
  ss << "worst relative gap " << worst << " (tol 1e-12)";
  detail = ss.str();
  return worst <= 1e-12;
}

bool criterion2(std::string& detail) {
  double worst = 0.0;
  for (Index m : {Index{10}, Index{100}, Index{2000}}) {
    for (Index beta : {Index{1}, Index{2}, m / 2, m}) {
      SamplingWeights w = sampling_weights(m, beta);
      double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
      if (!std::isfinite(sum)) {
        detail = "non-finite weight sum";
        return false;
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  std::ostringstream ss;
  ss << "worst |sum-1| " << worst << " (tol 1e-12)";
  detail = ss.str();
  return worst <= 1e-12;
}

bool criterion3(std::string& detail) {
  // (a) GSKM(xi=0) == SKM under a shared seed, 1000 steps, <= 1e-15.
  Problem p = gaussian_instance(80, 12, 33);
  Vec x0 = Vec::Constant(12, 7.0);
  SolverConfig skm;
  skm.variant = Variant::Skm;
  skm.beta = 8;
  skm.delta = 0.7;
  SolverConfig gskm = skm;
  gskm.variant = Variant::Gskm;
  gskm.xi = 0.0;
  CounterRng r1(5), r2(5);
  SolverState a = make_state(p, skm, x0);
  SolverState b = make_state(p, gskm, x0);
  double worst_a = 0.0;
  for (int k = 0; k < 1000; ++k) {
    skm_step(p, a, skm, r1);
    gskm_step(p, b, gskm, r2);
    worst_a = std::max(worst_a, (a.x - b.x).lpNorm<Eigen::Infinity>());
  }

  // (b) beta = m equals a deterministic reference Motzkin sweep exactly.
  SolverConfig mm;
  mm.variant = Variant::Skm;
  mm.beta = p.rows();
  mm.delta = 1.0;
  CounterRng r3(999);
  SolverState c = make_state(p, mm, x0);
  Vec ref = x0;
  double worst_b = 0.0;
  for (int k = 0; k < 500; ++k) {
    skm_step(p, c, mm, r3);
    Index best = -1;
    double best_r = 0.0;
    for (Index i = 0; i < p.rows(); ++i) {
      double r = p.row_dot(i, ref) - p.rhs()[i];
      if (r > best_r) {
        best_r = r;
        best = i;
      }
    }
    if (best >= 0) p.add_scaled_row(best, -mm.delta * best_r / p.row_norm_sq(best), ref);
    worst_b = std::max(worst_b, (c.x - ref).lpNorm<Eigen::Infinity>());
  }
  std::ostringstream ss;
  ss << "GSKM(0) vs SKM max gap " << worst_a << " (tol 1e-15); Motzkin gap " << worst_b
     << " (exact)";
  detail = ss.str();
  return worst_a <= 1e-15 && worst_b == 0.0;
}

bool criterion4(std::string& detail) {
  // PASKM y-sequence equals the GSKM x-sequence under omega(1-alpha) = -xi
  // and the fresh-gradient coupling alpha*gamma + delta*(1-alpha) =
  // delta*(1-xi); the PASKM run starts from the first SKM point with the
  // sample stream one draw ahead.
  Problem p = gaussian_instance(100, 20, 404);
  Vec x0 = Vec::Constant(20, 6.0);
  double worst = 0.0;
  for (double xi : {-0.1, -0.3}) {
    for (double delta : {0.5, 1.0}) {
      SolverConfig g;
      g.variant = Variant::Gskm;
      g.beta = 10;
      g.delta = delta;
      g.xi = xi;
      double alpha = 0.5;
      SolverConfig q;
      q.variant = Variant::Paskm;
      q.beta = 10;
      q.delta = delta;
      q.alpha = alpha;
      q.omega = -xi / (1.0 - alpha);
      q.gamma = delta * (alpha - xi) / alpha;

      CounterRng rg(888), rq(888);
      SolverState sg = make_state(p, g, x0);
      gskm_step(p, sg, g, rg);
      SolverState sq = make_state(p, q, sg.x);
      sample_subset(sq.scratch, p.rows(), q.beta, rq, sq.subset);
      for (int k = 0; k < 100; ++k) {
        gskm_step(p, sg, g, rg);
        paskm_step(p, sq, q, rq);
        worst = std::max(worst, (*sq.y - sg.x).lpNorm<Eigen::Infinity>());
      }
    }
  }
  std::ostringstream ss;
  ss << "max |y_k - x_k| " << worst << " over 100 iterations (tol 1e-10)";
  detail = ss.str();
  return worst <= 1e-10;
}

bool criterion5(std::string& detail) {
  const Index n = 20;
  Problem p = box_problem(n);
  Vec lo = Vec::Zero(n), hi = Vec::Ones(n);
  Vec x0 = Vec::Constant(n, 2.0);
  const double d0sq = distance_to_box(lo, hi, x0) * distance_to_box(lo, hi, x0);
  const int trials = 500, iters = 200;
  SpectralInfo s = spectral_summary(p);
  double worst_ratio = 0.0;
  for (double xi : {0.0, 0.5}) {
    ConvexityBounds b = convexity_bounds(s, p.rows(), 5, 1.0);
    RateReport r = gskm_rate(xi, 1.0, b);
    std::vector<double> mean_d2(iters + 1, 0.0);
    for (int t = 0; t < trials; ++t) {
      SolverConfig cfg;
      cfg.variant = xi == 0.0 ? Variant::Skm : Variant::Gskm;
      cfg.beta = 5;
      cfg.delta = 1.0;
      cfg.xi = xi;
      CounterRng rng(9000 + t);
      SolverState st = make_state(p, cfg, x0);
      for (int k = 1; k <= iters; ++k) {
        solver_step(p, st, cfg, rng);
        double d = distance_to_box(lo, hi, st.x);
        mean_d2[k] += d * d;
      }
    }
    for (int k = 1; k <= iters; ++k) {
      double bound = (1.0 + r.phi) * std::pow(r.rho, k - 1) * d0sq;
      worst_ratio = std::max(worst_ratio, (mean_d2[k] / trials) / bound);
    }
  }
  std::ostringstream ss;
  ss << "worst mean d^2 / bound " << worst_ratio << " (allowed 1.05)";
  detail = ss.str();
  return worst_ratio <= 1.05;
}

bool criterion6(std::string& detail) {
  const Index n = 20;
  Problem p = box_problem(n);
  Vec lo = Vec::Zero(n), hi = Vec::Ones(n);
  Vec x0 = Vec::Constant(n, 2.0);
  const double d0sq = 20.0;
  const int trials = 500, iters = 200;
  double worst_ratio = 0.0;
  for (double delta : {0.5, 1.0}) {
    std::vector<double> mean_f(iters + 1, 0.0);
    for (int t = 0; t < trials; ++t) {
      SolverConfig cfg;
      cfg.variant = Variant::Skm;
      cfg.beta = 5;
      cfg.delta = delta;
      CounterRng rng(7000 + t);
      SolverState st = make_state(p, cfg, x0);
      for (int k = 1; k <= iters; ++k) {
        solver_step(p, st, cfg, rng);
        mean_f[k] += expected_loss_exact(p, cesaro_average(st), 5);
      }
    }
    CesaroParams params;
    params.delta = delta;
    for (int k = 1; k <= iters; ++k) {
      double bound = cesaro_bounds(CesaroRegime::Skm, params, d0sq, 0.0, k);
      worst_ratio = std::max(worst_ratio, (mean_f[k] / trials) / bound);
    }
  }
  std::ostringstream ss;
  ss << "worst mean f(cesaro) / bound " << worst_ratio << " (allowed 1.05)";
  detail = ss.str();
  return worst_ratio <= 1.05;
}

bool criterion7(std::string& detail) {
  CounterRng rng(606);
  double worst_rel = 0.0;
  for (int t = 0; t < 1000; ++t) {
    double phi1 = rng.next_double();
    double phi2 = (1.0 - phi1) * rng.next_double() * 0.999;
    ScalarRecurrenceParams sp{phi1, phi2, 0.5 + rng.next_double()};
    for (Index k : {Index{1}, Index{2}, Index{7}, Index{33}}) {
      RecurrenceCheck c = recurrence_oracle(sp, k);
      if (c.simulated > c.bound_part1 * (1.0 + 1e-10) + 1e-300 ||
          c.simulated > c.bound_part2 * (1.0 + 1e-10) + 1e-300) {
        detail = "scalar recurrence exceeded a closed-form bound";
        return false;
      }
    }
  }
  int tested = 0;
  while (tested < 1000) {
    MatrixRecurrenceParams p;
    p.Pi1 = 0.9 * rng.next_double();
    p.Pi4 = 0.9 * rng.next_double();
    p.Pi2 = rng.next_double();
    p.Pi3 = rng.next_double();
    double det = p.Pi1 * p.Pi4 - p.Pi2 * p.Pi3;
    if (det < 0.0 || !(p.Pi1 + p.Pi4 < 1.0 + std::min(1.0, det))) continue;
    p.H1 = rng.next_double();
    p.F1 = rng.next_double();
    ++tested;
    for (Index k : {Index{1}, Index{4}, Index{21}}) {
      RecurrenceCheck c = recurrence_oracle(p, k);
      double scale = std::max({1e-30, std::abs(c.power_H), std::abs(c.power_F)});
      worst_rel = std::max(worst_rel, std::abs(c.closed_H - c.power_H) / scale);
      worst_rel = std::max(worst_rel, std::abs(c.closed_F - c.power_F) / scale);
      if (c.simulated_H > c.closed_H * (1.0 + 1e-10) + 1e-300 ||
          c.simulated_F > c.closed_F * (1.0 + 1e-10) + 1e-300) {
        detail = "matrix recurrence exceeded the closed form";
        return false;
      }
    }
  }
  std::ostringstream ss;
  ss << "1000+1000 draws; worst closed-form vs matrix-power relative gap " << worst_rel
     << " (tol 1e-10)";
  detail = ss.str();
  return worst_rel <= 1e-10;
}

bool criterion8(std::string& detail) {
  const Index n = 20;
  Problem p = box_problem(n);
  Vec lo = Vec::Zero(n), hi = Vec::Ones(n);
  SpectralInfo s = spectral_summary(p);
  CounterRng rng(321);
  int upper_viol = 0, lower_viol = 0;
  for (Index beta : {Index{1}, p.rows() / 2, p.rows()}) {
    ConvexityBounds b = convexity_bounds(s, p.rows(), beta, 1.0);
    for (int t = 0; t < 100; ++t) {
      Vec x(n);
      for (Index j = 0; j < n; ++j) x[j] = 4.0 * rng.normal();
      double d = distance_to_box(lo, hi, x);
      double f = expected_loss_exact(p, x, beta);
      if (f > 0.5 * b.mu2 * d * d * (1.0 + 1e-12)) ++upper_viol;
      if (f < 0.5 * b.mu1 * d * d * (1.0 - 1e-12)) ++lower_viol;
    }
  }
  std::ostringstream ss;
  ss << "upper-bound violations " << upper_viol << "/300 (must be 0); surrogate lower-bound "
     << "violations " << lower_viol << "/300 (reported, not fatal)";
  detail = ss.str();
  return upper_viol == 0;
}

bool criterion9(std::string& detail) {
  GenSpec spec;
  spec.m = 2000;
  spec.n = 500;
  spec.seed = 2020;
  Problem p = gen_random(spec).problem;
  Vec x0 = far_start_point(p);
  const double delta = 0.5;
  const Index beta = 100;
  SpectralInfo s = spectral_summary(p);
  ConvexityBounds b = convexity_bounds(s, p.rows(), beta, delta);
  PaskmParams pa = paskm_preset(delta, b, PaskmPreset::Param1);

  std::vector<double> it_skm, it_gskm, it_paskm;
  bool all_converged = true;
  auto converged_iters = [&all_converged](const RunResult& run) {
    all_converged = all_converged && run.reason == StopReason::Converged;
    return static_cast<double>(run.iterations);
  };
  for (int t = 0; t < 20; ++t) {
    SolverConfig cfg;
    cfg.beta = beta;
    cfg.delta = delta;
    cfg.stopping = {StopKind::PositiveResidualNorm, 1e-5, std::nullopt};
    cfg.max_iters = 500000;
    cfg.seed = 100 + static_cast<std::uint64_t>(t);
    cfg.trace_every = 1 << 30;
    cfg.check_every = 100;

    cfg.variant = Variant::Skm;
    it_skm.push_back(converged_iters(run_solver(p, cfg, x0)));
    cfg.variant = Variant::Gskm;
    cfg.xi = -0.1;
    it_gskm.push_back(converged_iters(run_solver(p, cfg, x0)));
    cfg.variant = Variant::Paskm;
    cfg.alpha = pa.alpha;
    cfg.omega = pa.omega;
    cfg.gamma = pa.gamma;
    it_paskm.push_back(converged_iters(run_solver(p, cfg, x0)));
  }
  if (!all_converged) {
    detail = "a run exhausted its iteration budget before reaching 1e-5";
    return false;
  }
  auto med = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  double m_skm = med(it_skm), m_gskm = med(it_gskm), m_paskm = med(it_paskm);
  std::ostringstream ss;
  ss << "median iterations: SKM " << m_skm << ", GSKM(-0.1) " << m_gskm << ", PASKM-1 " << m_paskm
     << " (need GSKM <= SKM and PASKM-1 <= SKM)";
  detail = ss.str();
  return m_paskm <= m_skm && m_gskm <= m_skm;
}

bool criterion10(std::string& detail) {
  CertificateReport r = certificate_bounds(10.0, 4, 0.0, 0.7, 100);
  if (r.k_min != 67) {
    detail = "worked example k_min != 67";
    return false;
  }
  for (Index k : {Index{10}, Index{50}, Index{200}}) {
    double pk = certificate_bounds(10.0, 4, 0.0, 0.7, k).p_bound;
    double pk2 = certificate_bounds(10.0, 4, 0.0, 0.7, k + 2).p_bound;
    if (!(pk2 < pk)) {
      detail = "p_bound not strictly decreasing";
      return false;
    }
  }
  // infeasible rational system x <= 0, -x <= -1
  RowMatrix A(2, 1);
  A << 1.0, -1.0;
  Vec b(2);
  b << 0.0, -1.0;
  Problem p = Problem::dense(A, b);
  EncodingLength sigma = encoding_length(p);
  double threshold = std::exp2(1.0 - sigma.sigma_ln);
  CounterRng rng(8);
  double worst_theta = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    Vec x = Vec::Constant(1, 20.0 * (rng.next_double() - 0.5));
    worst_theta = std::min(worst_theta, positive_residual(p, x).theta);
  }
  std::ostringstream ss;
  ss << "k_min=67; p decreasing; min theta " << worst_theta << " >= 2^(1-sigma) = " << threshold;
  detail = ss.str();
  return worst_theta >= threshold;
}

bool criterion11(std::string& detail) {
#ifndef LINFEAS_CLI_PATH
  detail = "CLI path not configured";
  return false;
#else
  fs::path dir = fs::temp_directory_path() / "linfeas_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string cli = LINFEAS_CLI_PATH;
  auto sh = [&dir](const std::string& cmd) {
    std::string full = cmd + " > " + (dir / "stdout.txt").string() + " 2>&1";
    return std::system(full.c_str());
  };
  std::string manifest = (dir / "prob.json").string();
  if (sh(cli + " generate --kind gaussian --m 300 --n 40 --mix 0.5 --seed 9 --out " + manifest) != 0) {
    detail = "generate failed";
    return false;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string solve_cmd = cli + " solve --problem " + manifest +
                          " --variant gskm --xi -0.1 --delta 0.8 --beta 30 --eps 1e-6"
                          " --max-iters 100000 --seed 4 --trace ";
  if (sh(solve_cmd + (dir / "t1.csv").string()) != 0 ||
      sh(solve_cmd + (dir / "t2.csv").string()) != 0) {
    detail = "solve failed";
    return false;
  }
  if (slurp(dir / "t1.csv") != slurp(dir / "t2.csv")) {
    detail = "solve traces differ between identical invocations";
    return false;
  }
  // sweep twice
  for (int i = 1; i <= 2; ++i) {
    std::ofstream plan(dir / "plan.json");
    plan << R"({"problem": {"manifest": ")" << manifest << R"("},
      "presets": ["skm", "gskm-1", "paskm-2"], "beta_grid": [10, 30],
      "delta_grid": [0.8], "trials": 2,
      "stopping": {"kind": "residual", "epsilon": 1e-5}, "max_iters": 100000,
      "seed": 17, "out_dir": ")" << (dir / ("sweep" + std::to_string(i))).string() << R"("})";
    plan.close();
    if (sh(cli + " sweep --plan " + (dir / "plan.json").string()) != 0) {
      detail = "sweep failed";
      return false;
    }
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "sweep1" / "traces")) {
    fs::path other = dir / "sweep2" / "traces" / entry.path().filename();
    if (!fs::exists(other)) {
      detail = "sweep trace " + entry.path().filename().string() + " missing on rerun";
      return false;
    }
    if (slurp(entry.path()) != slurp(other)) {
      detail = "sweep trace " + entry.path().filename().string() + " differs between reruns";
      return false;
    }
    ++compared;
  }
  std::ostringstream ss;
  ss << "solve trace byte-identical; " << compared << " sweep trace files byte-identical";
  detail = ss.str();
  return compared == 12;
#endif
}

}  // namespace

int main() {
  run(1, "sampling-expectation oracle equivalence", criterion1);
  run(2, "weight normalization", criterion2);
  run(3, "GSKM(0)=SKM and beta=m Motzkin reductions", criterion3);
  run(4, "GSKM/PASKM sequence equivalence", criterion4);
  run(5, "distance-contraction bound at desk scale", criterion5);
  run(6, "Cesaro average bound", criterion6);
  run(7, "recurrence-bound oracles", criterion7);
  run(8, "sandwich bounds on box instances", criterion8);
  run(9, "qualitative iteration-count trend (2000x500)", criterion9);
  run(10, "certificate machinery", criterion10);
  run(11, "byte-identical trace determinism", criterion11);
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << " ("
            << (11 - g_failures) << "/11)\n";
  return g_failures == 0 ? 0 : 1;
}
