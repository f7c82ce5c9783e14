#include "linfeas/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace linfeas {

namespace {

constexpr double kEigenZeroRel = 1e-10;

Eigen::MatrixXd scaled_gram(const Problem& problem, RowScaling scaling) {
  if (scaling == RowScaling::Raw) return problem.gram();
  // Row-normalised Gram: sum of a_i a_i' / ||a_i||^2. The iterates are
  // identical for the scaled system, so its spectra drive the theory.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(problem.cols(), problem.cols());
  Vec e = Vec::Zero(problem.cols());
  for (Index i = 0; i < problem.rows(); ++i) {
    e.setZero();
    problem.add_scaled_row(i, 1.0 / std::sqrt(problem.row_norm_sq(i)), e);
    g.selfadjointView<Eigen::Lower>().rankUpdate(e);
  }
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

double power_iteration(const Eigen::MatrixXd& g, double shift, Index max_iters, double tol) {
  // Largest eigenvalue of (shift*I - g) when shift > 0, else of g itself.
  Vec v = Vec::Ones(g.rows()).normalized();
  double lambda = 0.0;
  for (Index it = 0; it < max_iters; ++it) {
    Vec w = shift > 0.0 ? Vec(shift * v - g * v) : Vec(g * v);
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    double next = shift > 0.0 ? shift - w.dot(g * w) : w.dot(g * w);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
    v = std::move(w);
  }
  throw std::runtime_error("spectral_summary: power iteration did not converge (residual " +
                           std::to_string(lambda) + ")");
}

}  // namespace

SpectralInfo spectral_from_gram(const Eigen::MatrixXd& gram) {
  SpectralInfo info;
  info.frobenius_sq = gram.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral_summary: eigendecomposition failed");
  }
  const Vec& ev = es.eigenvalues();  // ascending
  info.lambda_max = ev[ev.size() - 1];
  double threshold = kEigenZeroRel * info.lambda_max;
  info.lambda_min_plus = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > threshold) {
      info.lambda_min_plus = ev[i];
      break;
    }
  }
  if (!(info.lambda_min_plus > 0.0)) {
    throw std::runtime_error("spectral_summary: no eigenvalue above the zero threshold");
  }
  info.hoffman_sq_surrogate = 1.0 / info.lambda_min_plus;
  return info;
}

SpectralInfo spectral_summary(const Problem& problem, RowScaling scaling) {
  Eigen::MatrixXd g = scaled_gram(problem, scaling);
  if (problem.cols() <= 5000) {
    return spectral_from_gram(g);
  }
  // Iterative extremal-eigenvalue fallback for wide systems where the full
  // decomposition is too expensive.
  SpectralInfo info;
  info.frobenius_sq = g.trace();
  info.lambda_max = power_iteration(g, 0.0, 10000, 1e-12);
  double lambda_min = power_iteration(g, 1.0000001 * info.lambda_max, 10000, 1e-12);
  if (lambda_min <= kEigenZeroRel * info.lambda_max) {
    throw std::runtime_error(
        "spectral_summary: smallest eigenvalue indistinguishable from zero; "
        "rank-deficient system needs the dense path");
  }
  info.lambda_min_plus = lambda_min;
  info.hoffman_sq_surrogate = 1.0 / info.lambda_min_plus;
  return info;
}

ConvexityBounds make_bounds(double mu1, double mu2, double delta) {
  if (!(delta > 0.0 && delta <= 2.0)) {
    throw std::invalid_argument("make_bounds: delta must be in (0, 2]");
  }
  if (!(mu1 > 0.0 && mu1 <= mu2 && mu2 <= 1.0)) {
    throw std::invalid_argument("make_bounds: need 0 < mu1 <= mu2 <= 1");
  }
  ConvexityBounds b;
  b.mu1 = mu1;
  b.mu2 = mu2;
  b.eta = 2.0 * delta - delta * delta;
  b.h_delta = 1.0 - b.eta * b.mu1;
  return b;
}

ConvexityBounds convexity_bounds(const SpectralInfo& spectral, Index m, Index beta, double delta) {
  if (!(delta > 0.0 && delta <= 2.0)) {
    throw std::invalid_argument("convexity_bounds: delta must be in (0, 2]");
  }
  ConvexityBounds b;
  b.mu2 = std::min(1.0, static_cast<double>(beta) / static_cast<double>(m) * spectral.lambda_max);
  double mu1 = spectral.lambda_min_plus / static_cast<double>(m);
  if (mu1 > b.mu2) {
    mu1 = b.mu2;
    b.mu1_clamped = true;
  }
  b.mu1 = mu1;
  b.eta = 2.0 * delta - delta * delta;
  b.h_delta = 1.0 - b.eta * b.mu1;
  return b;
}

QMembership q_membership(double xi, double delta, const ConvexityBounds& bounds) {
  QMembership q;
  if (xi >= 0.0 && xi <= 1.0) {
    q.region = QRegion::Q1;
    return q;
  }
  if (xi > -1.0 && xi <= 0.0) {
    q.q2_lhs = (1.0 + xi) * std::sqrt(bounds.h_delta) -
               xi * (1.0 + delta * std::sqrt(bounds.mu2));
    q.slack = 1.0 - q.q2_lhs;
    q.region = q.q2_lhs < 1.0 ? QRegion::Q2 : QRegion::Outside;
    return q;
  }
  q.region = QRegion::Outside;
  return q;
}

namespace {

// Jordan expansion of the nonnegative 2x2 recurrence matrix
// [Pi1 Pi2; Pi3 Pi4]: eigenvalues rho1 <= rho2 and the coefficients of
//   M^k = [ g11_1 r1^k + g11_2 r2^k,  g12 (r1^k - r2^k);
//           g21 (r2^k - r1^k),        g22_1 r1^k + g22_2 r2^k ].
void fill_matrix_rate(RateReport& r) {
  double u = r.Pi1 - r.Pi4;
  double disc = u * u + 4.0 * r.Pi2 * r.Pi3;
  double sd = std::sqrt(disc);
  r.rho1 = 0.5 * (r.Pi1 + r.Pi4 - sd);
  r.rho2 = 0.5 * (r.Pi1 + r.Pi4 + sd);
  if (r.Pi3 != 0.0) {
    r.Gamma1 = (u + sd) / (2.0 * r.Pi3);
    r.Gamma2 = (u - sd) / (2.0 * r.Pi3);
  } else {
    r.Gamma1 = std::numeric_limits<double>::infinity();
    r.Gamma2 = -std::numeric_limits<double>::infinity();
  }
  if (sd > 0.0) {
    r.Gamma3 = r.Pi3 / sd;
    r.g11_1 = -(u - sd) / (2.0 * sd);  // -Gamma2 * Gamma3
    r.g11_2 = (u + sd) / (2.0 * sd);   //  Gamma1 * Gamma3
    r.g12 = -r.Pi2 / sd;               //  Gamma1 * Gamma2 * Gamma3
    r.g21 = r.Pi3 / sd;                //  Gamma3
    r.g22_1 = r.g11_2;
    r.g22_2 = r.g11_1;
  } else {
    // Repeated eigenvalue: the diagonalisation is undefined.
    r.Gamma3 = std::numeric_limits<double>::quiet_NaN();
    r.g11_1 = r.g11_2 = r.g12 = r.g21 = r.g22_1 = r.g22_2 =
        std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

RateReport gskm_rate(double xi, double delta, const ConvexityBounds& bounds) {
  RateReport r;
  double h = bounds.h_delta;
  QMembership q = q_membership(xi, delta, bounds);
  if (xi >= 0.0) {
    r.regime = RateRegime::GskmQ1;
    r.phi1 = (1.0 - xi) * h;
    r.phi2 = xi * h;
    r.phi = 0.5 * (-r.phi1 + std::sqrt(r.phi1 * r.phi1 + 4.0 * r.phi2));
    r.rho = r.phi + r.phi1;
    double denom = r.phi + r.rho;
    if (denom > 0.0) {
      r.R1 = (1.0 + r.phi) / denom;
      r.R2 = (1.0 - r.rho) / denom;
      r.R3 = (r.rho + r.phi2) / denom;
      r.R4 = (r.phi - r.phi2) / denom;
    } else {
      r.R1 = r.R2 = r.R3 = r.R4 = std::numeric_limits<double>::quiet_NaN();
    }
    if (xi > 1.0) r.violated.push_back("xi > 1");
    if (!(h < 1.0)) r.violated.push_back("h(delta) >= 1: no contraction");
    if (!(r.phi1 + r.phi2 < 1.0)) r.violated.push_back("phi1 + phi2 >= 1");
  } else {
    r.regime = RateRegime::GskmQ2;
    r.Pi1 = std::sqrt(h);
    r.Pi2 = std::abs(xi);
    r.Pi3 = delta * std::sqrt(bounds.mu2 * h);
    r.Pi4 = std::abs(xi) * (1.0 + delta * std::sqrt(bounds.mu2));
    fill_matrix_rate(r);
    // the certificate machinery consumes max{rho, rho2^2}
    r.phi = 0.0;
    r.rho = r.rho2 * r.rho2;
    if (q.region != QRegion::Q2) r.violated.push_back("xi outside Q2: (1+xi) sqrt(h) - xi (1 + delta sqrt(mu2)) >= 1");
    if (!(xi > -1.0)) r.violated.push_back("xi <= -1");
  }
  r.preconditions_ok = r.violated.empty();
  return r;
}

PaskmParams paskm_preset(double delta, const ConvexityBounds& bounds, PaskmPreset preset) {
  if (!(delta > 0.0 && delta < 2.0)) {
    throw std::invalid_argument("paskm_preset: delta must be in (0, 2)");
  }
  double eta = bounds.eta;
  double h = bounds.h_delta;
  double mu1 = bounds.mu1;
  PaskmParams p;
  switch (preset) {
    case PaskmPreset::Param1:
    case PaskmPreset::Param2: {
      double c = preset == PaskmPreset::Param1 ? 1.5 : 2.0;
      p.gamma = c * std::sqrt(eta);
      p.omega = (2.0 - p.gamma) / 3.0;
      double g = p.gamma;
      double alpha_cap = (1.0 - g + g * g) * (1.0 - h) /
                         ((1.0 - h) + g + g * h - g * g * h);
      p.alpha = 0.99 * alpha_cap;
      break;
    }
    case PaskmPreset::Zeta: {
      double zeta = mu1 < 1.0 ? 3.99 * eta * mu1 / ((1.0 - mu1) * (1.0 - mu1))
                              : 3.99 * eta;
      p.gamma = std::sqrt(zeta * eta * mu1);
      p.omega = 1.0 - (zeta * mu1 * mu1 + 2.0 * p.gamma * mu1 - zeta * mu1) /
                          (1.0 + zeta * mu1 * mu1);
      p.alpha = eta / (eta + p.gamma);
      break;
    }
    case PaskmPreset::Custom:
      throw std::invalid_argument("paskm_preset: Custom preset takes explicit parameters");
  }
  return p;
}

RateReport paskm_rate(double alpha, double omega, double gamma, double delta,
                      const ConvexityBounds& bounds) {
  double eta = 2.0 * delta - delta * delta;
  if (std::abs(eta - bounds.eta) > 1e-12 * std::max(1.0, std::abs(eta))) {
    throw std::invalid_argument("paskm_rate: delta does not match the bounds' eta");
  }
  RateReport r;
  r.regime = RateRegime::PaskmCoupled;
  double h = bounds.h_delta;
  double mu1 = bounds.mu1;
  double slack = gamma + 3.0 * omega - 2.0;
  r.Pi1 = omega * (1.0 + gamma);
  r.Pi2 = (1.0 - omega) + gamma * mu1 * slack;
  r.Pi3 = alpha * omega * (1.0 + gamma);
  r.Pi4 = (1.0 - alpha) * h + alpha * (1.0 - omega) + alpha * gamma * mu1 * slack;
  fill_matrix_rate(r);

  if (!(alpha >= 0.0 && alpha <= 1.0)) r.violated.push_back("alpha outside [0, 1]");
  if (!(omega >= 0.0 && omega <= 1.0)) r.violated.push_back("omega outside [0, 1]");
  if (!(slack <= 0.0)) r.violated.push_back("gamma + 3*omega - 2 > 0");
  if (!(omega * h * (1.0 - alpha) * (1.0 + gamma) < 1.0)) {
    r.violated.push_back("omega h (1-alpha)(1+gamma) >= 1");
  }
  double cond = r.Pi1 + r.Pi4 - r.Pi1 * r.Pi4 + r.Pi2 * r.Pi3;
  if (!(cond < 1.0)) r.violated.push_back("condition (Pi1 + Pi4 - Pi1 Pi4 + Pi2 Pi3) >= 1");
  if (r.Pi2 < 0.0) r.violated.push_back("Pi2 < 0: matrix recurrence not applicable");
  r.preconditions_ok = r.violated.empty();

  // Omega-rate regime: omega itself is the contraction rate when the
  // parameters follow the zeta pattern gamma = sqrt(zeta eta mu1),
  // alpha = eta/(eta+gamma).
  r.omega_rate = std::numeric_limits<double>::quiet_NaN();
  if (gamma > 0.0 && bounds.eta > 0.0 && mu1 > 0.0) {
    double zeta = gamma * gamma / (bounds.eta * mu1);
    double alpha_ref = bounds.eta / (bounds.eta + gamma);
    double omega_ref = 1.0 - (zeta * mu1 * mu1 + 2.0 * gamma * mu1 - zeta * mu1) /
                                 (1.0 + zeta * mu1 * mu1);
    bool zeta_ok = mu1 < 1.0 ? zeta < 4.0 * bounds.eta * mu1 / ((1.0 - mu1) * (1.0 - mu1))
                             : zeta > 0.0;
    if (zeta_ok && std::abs(alpha - alpha_ref) <= 1e-9 && std::abs(omega - omega_ref) <= 1e-9) {
      r.regime = r.preconditions_ok ? RateRegime::PaskmCoupled : RateRegime::PaskmOmega;
      r.omega_rate = omega;
    }
  }
  return r;
}

double cesaro_bounds(CesaroRegime regime, const CesaroParams& params, double d0_sq,
                     double f0, Index k) {
  if (k < 1) throw std::invalid_argument("cesaro_bounds: k must be >= 1");
  double delta = params.delta;
  switch (regime) {
    case CesaroRegime::Skm: {
      if (!(delta > 0.0 && delta < 2.0)) {
        throw std::invalid_argument("cesaro_bounds: requires 0 < delta < 2");
      }
      return d0_sq / (2.0 * delta * static_cast<double>(k) * (2.0 - delta));
    }
    case CesaroRegime::Gskm: {
      double xi = params.xi;
      if (!(xi > -1.0 && xi <= 0.0)) {
        throw std::invalid_argument("cesaro_bounds: requires -1 < xi <= 0");
      }
      double delta_cap = 2.0 * (1.0 + xi) / (1.0 - 2.0 * xi);
      if (!(delta > 0.0 && delta < delta_cap)) {
        throw std::invalid_argument("cesaro_bounds: requires 0 < delta < 2(1+xi)/(1-2xi)");
      }
      double num = (1.0 + xi) * (1.0 + xi - 2.0 * delta * xi * params.mu2) * d0_sq +
                   2.0 * xi * delta * (delta * xi - delta - 1.0) * f0;
      double den = 2.0 * delta * static_cast<double>(k) * (2.0 + 2.0 * xi + 2.0 * delta * xi - delta);
      return num / den;
    }
    case CesaroRegime::Paskm: {
      double alpha = params.alpha, omega = params.omega, gamma = params.gamma;
      if (!(alpha > 0.0 && alpha <= 1.0 && omega >= 0.0 && omega < 1.0)) {
        throw std::invalid_argument("cesaro_bounds: requires 0 <= 1-alpha, omega < 1");
      }
      double coupling = alpha * gamma - (alpha * delta + omega * delta * (1.0 - alpha));
      if (std::abs(coupling) > 1e-12 * std::max(1.0, std::abs(alpha * gamma))) {
        throw std::invalid_argument(
            "cesaro_bounds: requires the coupling alpha*gamma = alpha*delta + omega*delta*(1-alpha)");
      }
      double phi = omega * (1.0 - alpha);
      double delta_cap = 2.0 * (1.0 - phi) / (1.0 + 2.0 * phi);
      if (!(delta > 0.0 && delta < delta_cap)) {
        throw std::invalid_argument(
            "cesaro_bounds: requires 0 < delta < 2(1-omega+alpha*omega)/(1+2*omega-2*alpha*omega)");
      }
      double num = (1.0 - phi) * (1.0 - phi) * d0_sq +
                   2.0 * delta * (delta - 2.0 + 3.0 * phi + delta * phi) * f0;
      double den = 2.0 * delta * static_cast<double>(k) * (2.0 - 2.0 * phi - 2.0 * delta * phi - delta);
      return num / den;
    }
  }
  throw std::logic_error("cesaro_bounds: unreachable");
}

RecurrenceCheck recurrence_oracle(const ScalarRecurrenceParams& params, Index k) {
  if (!(params.phi1 >= 0.0 && params.phi2 >= 0.0)) {
    throw std::invalid_argument("recurrence_oracle: phi1, phi2 must be nonnegative");
  }
  if (!(params.phi1 + params.phi2 < 1.0)) {
    throw std::invalid_argument("recurrence_oracle: requires phi1 + phi2 < 1");
  }
  if (k < 1) throw std::invalid_argument("recurrence_oracle: k must be >= 1");
  double phi = 0.5 * (-params.phi1 + std::sqrt(params.phi1 * params.phi1 + 4.0 * params.phi2));
  double rho = phi + params.phi1;

  double g_prev = params.G0, g = params.G0;  // G0 = G1
  for (Index j = 1; j < k; ++j) {
    double next = params.phi1 * g + params.phi2 * g_prev;
    g_prev = g;
    g = next;
  }
  RecurrenceCheck out;
  out.simulated = g;
  out.bound_part1 = (1.0 + phi) * std::pow(rho, static_cast<double>(k - 1)) * params.G0;
  double denom = phi + rho;
  if (denom > 0.0) {
    double R1 = (1.0 + phi) / denom;
    double R2 = (1.0 - rho) / denom;
    double R3 = (rho + params.phi2) / denom;
    double R4 = (phi - params.phi2) / denom;
    out.bound_part2 =
        (k % 2 == 0)
            ? (R1 * std::pow(rho, static_cast<double>(k)) - R2 * std::pow(phi, static_cast<double>(k))) * params.G0
            : (R3 * std::pow(rho, static_cast<double>(k - 1)) + R4 * std::pow(phi, static_cast<double>(k - 1))) * params.G0;
  } else {
    out.bound_part2 = out.bound_part1;
  }
  return out;
}

RecurrenceCheck recurrence_oracle(const MatrixRecurrenceParams& params, Index k) {
  if (!(params.Pi1 >= 0.0 && params.Pi2 >= 0.0 && params.Pi3 >= 0.0 && params.Pi4 >= 0.0)) {
    throw std::invalid_argument("recurrence_oracle: Pi entries must be nonnegative");
  }
  double det = params.Pi1 * params.Pi4 - params.Pi2 * params.Pi3;
  if (!(det >= 0.0)) {
    throw std::invalid_argument("recurrence_oracle: requires Pi1 Pi4 - Pi2 Pi3 >= 0");
  }
  if (!(params.Pi1 + params.Pi4 < 1.0 + std::min(1.0, det))) {
    throw std::invalid_argument("recurrence_oracle: requires Pi1 + Pi4 < 1 + min{1, det}");
  }
  if (k < 0) throw std::invalid_argument("recurrence_oracle: k must be >= 0");

  RateReport r;
  r.Pi1 = params.Pi1;
  r.Pi2 = params.Pi2;
  r.Pi3 = params.Pi3;
  r.Pi4 = params.Pi4;
  fill_matrix_rate(r);

  RecurrenceCheck out;
  double h = params.H1, f = params.F1;
  for (Index j = 0; j < k; ++j) {
    double hn = params.Pi1 * h + params.Pi2 * f;
    double fn = params.Pi3 * h + params.Pi4 * f;
    h = hn;
    f = fn;
  }
  out.simulated_H = h;
  out.simulated_F = f;

  double r1k = std::pow(r.rho1, static_cast<double>(k));
  double r2k = std::pow(r.rho2, static_cast<double>(k));
  out.closed_H = (r.g11_1 * r1k + r.g11_2 * r2k) * params.H1 + r.g12 * (r1k - r2k) * params.F1;
  out.closed_F = r.g21 * (r2k - r1k) * params.H1 + (r.g22_1 * r1k + r.g22_2 * r2k) * params.F1;

  Eigen::Matrix2d M;
  M << params.Pi1, params.Pi2, params.Pi3, params.Pi4;
  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  for (Index j = 0; j < k; ++j) P = P * M;
  Eigen::Vector2d v = P * Eigen::Vector2d(params.H1, params.F1);
  out.power_H = v[0];
  out.power_F = v[1];
  return out;
}

EncodingLength encoding_length(const Problem& problem) {
  EncodingLength e;
  double sum_ln = 0.0;
  auto add_entry = [&sum_ln](double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("encoding_length: non-finite entry");
    sum_ln += std::log(std::abs(v) + 1.0);
  };
  if (problem.is_dense()) {
    const RowMatrix& A = problem.dense_matrix();
    for (Index i = 0; i < A.rows(); ++i) {
      for (Index j = 0; j < A.cols(); ++j) add_entry(A(i, j));
    }
  } else {
    for (double v : problem.csr_values()) add_entry(v);  // implicit zeros add ln(1) = 0
  }
  for (Index i = 0; i < problem.rows(); ++i) add_entry(problem.rhs()[i]);
  double mn = static_cast<double>(problem.rows()) * static_cast<double>(problem.cols());
  e.sigma_ln = sum_ln + std::log(mn) + 2.0;
  e.sigma_log2 = sum_ln / std::log(2.0) + std::log2(mn) + 2.0;
  return e;
}

CertificateReport certificate_bounds(double sigma, Index n, double phi, double rho_bar,
                                     Index k, double psi) {
  if (!(rho_bar > 0.0 && rho_bar < 1.0)) {
    throw std::invalid_argument("certificate_bounds: rho_bar must be in (0, 1); no contraction");
  }
  if (n < 1) throw std::invalid_argument("certificate_bounds: n must be >= 1");
  if (!(psi > 0.0)) throw std::invalid_argument("certificate_bounds: psi must be positive");
  CertificateReport rep;
  rep.sigma = sigma;
  rep.psi = psi;
  rep.theta_threshold = std::exp2(1.0 - sigma);
  double numerator = 4.0 * sigma - 4.0 - std::log2(static_cast<double>(n)) +
                     std::log2(1.0 + phi) + 2.0 * std::log2(psi);
  double kmin = std::ceil(numerator / std::log2(1.0 / rho_bar));
  rep.k_min = kmin > 0.0 ? static_cast<Index>(kmin) : 0;
  rep.p_bound = std::sqrt((1.0 + phi) / static_cast<double>(n)) *
                std::exp2(2.0 * sigma - 2.0) * psi *
                std::pow(rho_bar, static_cast<double>(k) / 2.0);
  rep.log2_theta_threshold = 1.0 - sigma;
  rep.log2_p_bound = 0.5 * std::log2((1.0 + phi) / static_cast<double>(n)) +
                     (2.0 * sigma - 2.0) + std::log2(psi) +
                     0.5 * static_cast<double>(k) * std::log2(rho_bar);
  return rep;
}

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string to_json(const RateReport& r, const ConvexityBounds& b) {
  nlohmann::json j;
  switch (r.regime) {
    case RateRegime::GskmQ1: j["regime"] = "GSKM_Q1"; break;
    case RateRegime::GskmQ2: j["regime"] = "GSKM_Q2"; break;
    case RateRegime::PaskmCoupled: j["regime"] = "PASKM_coupled"; break;
    case RateRegime::PaskmOmega: j["regime"] = "PASKM_omega"; break;
  }
  j["mu1"] = b.mu1;
  j["mu2"] = b.mu2;
  j["eta"] = b.eta;
  j["h_delta"] = b.h_delta;
  j["mu1_clamped"] = b.mu1_clamped;
  j["phi1"] = r.phi1;
  j["phi2"] = r.phi2;
  j["phi"] = finite_or_null(r.phi);
  j["rho"] = finite_or_null(r.rho);
  j["R"] = {finite_or_null(r.R1), finite_or_null(r.R2), finite_or_null(r.R3), finite_or_null(r.R4)};
  j["Pi"] = {r.Pi1, r.Pi2, r.Pi3, r.Pi4};
  j["Gamma"] = {finite_or_null(r.Gamma1), finite_or_null(r.Gamma2), finite_or_null(r.Gamma3)};
  j["rho1"] = finite_or_null(r.rho1);
  j["rho2"] = finite_or_null(r.rho2);
  if (std::isfinite(r.omega_rate)) j["omega_rate"] = r.omega_rate;
  j["preconditions_ok"] = r.preconditions_ok;
  j["violated"] = r.violated;
  return j.dump(2);
}

std::string to_json(const CertificateReport& r) {
  nlohmann::json j;
  j["sigma"] = r.sigma;
  j["theta_threshold"] = r.theta_threshold;
  j["k_min"] = r.k_min;
  j["p_bound"] = finite_or_null(r.p_bound);
  j["psi"] = r.psi;
  j["log2_theta_threshold"] = r.log2_theta_threshold;
  j["log2_p_bound"] = r.log2_p_bound;
  return j.dump(2);
}

}  // namespace linfeas
