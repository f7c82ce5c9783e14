#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linfeas/problem.hpp"

namespace linfeas {

/// Spectral quantities of A'A backing the rate calculators.
struct SpectralInfo {
  double lambda_min_plus = 0.0;      // smallest eigenvalue above 1e-10 * lambda_max
  double lambda_max = 0.0;
  double frobenius_sq = 0.0;         // ||A||_F^2 = trace(A'A)
  double hoffman_sq_surrogate = 0.0; // L^2 = 1 / lambda_min_plus (consistent-system form)
};

enum class RowScaling { Raw, Normalized };

/// mu1/mu2 sandwich constants and the per-step contraction h(delta).
struct ConvexityBounds {
  double mu1 = 0.0;      // lambda_min_plus / m surrogate, clamped to mu2
  double mu2 = 0.0;      // min{1, (beta/m) lambda_max}
  double eta = 0.0;      // 2*delta - delta^2
  double h_delta = 0.0;  // 1 - eta * mu1
  bool mu1_clamped = false;
};

enum class QRegion { Q1, Q2, Outside };

struct QMembership {
  QRegion region = QRegion::Outside;
  double q2_lhs = 0.0;  // (1+xi) sqrt(h) - xi (1 + delta sqrt(mu2))
  double slack = 0.0;   // 1 - q2_lhs, positive inside Q2
};

enum class RateRegime { GskmQ1, GskmQ2, PaskmCoupled, PaskmOmega };

/// Constants of one convergence-rate regime plus precondition flags. Invalid
/// parameter regions are flagged, never thrown; only mathematically
/// undefined expressions are left NaN.
struct RateReport {
  RateRegime regime = RateRegime::GskmQ1;
  double phi1 = 0.0, phi2 = 0.0;
  // Q1: phi is the largest root of phi^2 + phi1 phi - phi2 = 0 and
  // rho = phi + phi1. Q2/PASKM regimes carry phi = 0 and rho = rho2^2,
  // the values the certificate bound max{rho, rho2^2} consumes.
  double phi = 0.0, rho = 0.0;
  double R1 = 0.0, R2 = 0.0, R3 = 0.0, R4 = 0.0;
  double Pi1 = 0.0, Pi2 = 0.0, Pi3 = 0.0, Pi4 = 0.0;
  double Gamma1 = 0.0, Gamma2 = 0.0, Gamma3 = 0.0;
  double rho1 = 0.0, rho2 = 0.0;
  // Jordan-expansion coefficients of the 2x2 recurrence matrix power:
  //   M^k = [ g11_1 rho1^k + g11_2 rho2^k, g12 (rho1^k - rho2^k);
  //           g21 (rho2^k - rho1^k),      g22_1 rho1^k + g22_2 rho2^k ]
  double g11_1 = 0.0, g11_2 = 0.0, g12 = 0.0, g21 = 0.0, g22_1 = 0.0, g22_2 = 0.0;
  double omega_rate = 0.0;  // omega, when the parameters follow the zeta family
  bool preconditions_ok = false;
  std::vector<std::string> violated;
};

struct CertificateReport {
  double sigma = 0.0;            // binary encoding length used for the bounds
  double theta_threshold = 0.0;  // 2^(1-sigma); underflows for large sigma
  Index k_min = 0;               // iterations needed before a certificate is expected
  double p_bound = 0.0;          // infeasibility-probability bound at k
  double psi = 1.0;              // max row norm (non-normalised correction)
  // log2 views of the same quantities, finite even when the linear-scale
  // values over/underflow
  double log2_theta_threshold = 0.0;
  double log2_p_bound = 0.0;
};

/// Both conventions of the binary encoding length: the literal natural-log
/// form and the base-2 reading used by the iteration bound.
struct EncodingLength {
  double sigma_ln = 0.0;
  double sigma_log2 = 0.0;
};

SpectralInfo spectral_summary(const Problem& problem, RowScaling scaling = RowScaling::Raw);

/// Same extraction from an explicit Gram matrix A'A.
SpectralInfo spectral_from_gram(const Eigen::MatrixXd& gram);

ConvexityBounds convexity_bounds(const SpectralInfo& spectral, Index m, Index beta, double delta);

/// Bounds from explicit sandwich constants (worked-example inputs).
ConvexityBounds make_bounds(double mu1, double mu2, double delta);

QMembership q_membership(double xi, double delta, const ConvexityBounds& bounds);

RateReport gskm_rate(double xi, double delta, const ConvexityBounds& bounds);

enum class PaskmPreset { Param1, Param2, Zeta, Custom };

struct PaskmParams {
  double alpha = 0.0, omega = 0.0, gamma = 0.0;
};

PaskmParams paskm_preset(double delta, const ConvexityBounds& bounds, PaskmPreset preset);

RateReport paskm_rate(double alpha, double omega, double gamma, double delta,
                      const ConvexityBounds& bounds);

enum class CesaroRegime { Skm, Gskm, Paskm };

struct CesaroParams {
  double delta = 0.0;
  double xi = 0.0;                               // GSKM
  double alpha = 0.0, omega = 0.0, gamma = 0.0;  // PASKM
  double mu2 = 0.0;                              // GSKM numerator term
};

/// Right-hand side of the Cesaro-average bound E[f(mean iterate)] at step k.
double cesaro_bounds(CesaroRegime regime, const CesaroParams& params, double d0_sq,
                     double f0, Index k);

enum class RecurrenceKind { Scalar, Matrix };

struct RecurrenceCheck {
  // Scalar kind: simulated G_k plus both closed-form bounds for it.
  double simulated = 0.0;
  double bound_part1 = 0.0;     // (1+phi) rho^(k-1) G0
  double bound_part2 = 0.0;     // even/odd R-form for G_k
  // Matrix kind: simulated [H_k, F_k], closed form and direct matrix power.
  double simulated_H = 0.0, simulated_F = 0.0;
  double closed_H = 0.0, closed_F = 0.0;
  double power_H = 0.0, power_F = 0.0;
};

struct ScalarRecurrenceParams {
  double phi1 = 0.0, phi2 = 0.0;
  double G0 = 1.0;  // G1 = G0
};

struct MatrixRecurrenceParams {
  double Pi1 = 0.0, Pi2 = 0.0, Pi3 = 0.0, Pi4 = 0.0;
  double H1 = 1.0, F1 = 0.0;
};

RecurrenceCheck recurrence_oracle(const ScalarRecurrenceParams& params, Index k);
RecurrenceCheck recurrence_oracle(const MatrixRecurrenceParams& params, Index k);

EncodingLength encoding_length(const Problem& problem);

/// Certificate-of-feasibility arithmetic (base-2 logs throughout):
///   k_min = ceil[(4 sigma - 4 - log2 n + log2(1+phi) + 2 log2 psi) / log2(1/rho_bar)]
///   p     = sqrt((1+phi)/n) * 2^(2 sigma - 2) * psi * rho_bar^(k/2)
/// psi = 1 recovers the normalised-system form.
CertificateReport certificate_bounds(double sigma, Index n, double phi, double rho_bar,
                                     Index k, double psi = 1.0);

std::string to_json(const RateReport& report, const ConvexityBounds& bounds);
std::string to_json(const CertificateReport& report);

}  // namespace linfeas
