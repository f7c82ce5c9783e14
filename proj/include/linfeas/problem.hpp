#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace linfeas {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Elementwise violation summary of a point against Ax <= b.
struct ResidualSummary {
  Vec positive_residual;  // (Ax - b)^+ per row
  double norm2 = 0.0;     // ||(Ax - b)^+||_2
  double theta = 0.0;     // max violation, 0 if feasible
  double fsc = 0.0;       // fraction of satisfied constraints
};

/// Cheap per-iteration statistics (no m-vector materialised).
struct ResidualStats {
  double norm2 = 0.0;
  double theta = 0.0;
  double fsc = 0.0;
  double max_raw = 0.0;  // max_i a_i'x - b_i, sign kept
};

/// A linear feasibility instance Ax <= b with cached squared row norms.
/// Rows are stored as given (not normalised); the projection update divides
/// by ||a_i||^2, which makes the iterates invariant under row rescaling.
/// Immutable after construction and shareable across threads.
class Problem {
 public:
  static Problem dense(RowMatrix A, Vec b);
  static Problem csr(Index m, Index n, std::vector<Index> row_ptr,
                     std::vector<Index> col_idx, std::vector<double> values, Vec b);

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  const Vec& rhs() const { return b_; }
  const Vec& row_norms_sq() const { return row_norms_sq_; }
  double row_norm_sq(Index i) const { return row_norms_sq_[i]; }
  bool is_dense() const { return dense_storage_; }
  const RowMatrix& dense_matrix() const;
  const std::vector<double>& csr_values() const { return values_; }

  /// a_i' x
  double row_dot(Index i, const Vec& x) const;

  /// x += c * a_i
  void add_scaled_row(Index i, double c, Vec& x) const;

  /// Full residual r = Ax - b (sign kept).
  void residual_into(const Vec& x, Vec& r) const;

  ResidualStats residual_stats(const Vec& x, double fsc_tol = 0.0) const;

  /// Dense n x n Gram matrix A'A, accumulated row by row.
  Eigen::MatrixXd gram() const;

  /// Largest row norm max_i ||a_i||.
  double max_row_norm() const;

 private:
  Problem() = default;
  void finalize_norms();

  Index m_ = 0, n_ = 0;
  Vec b_;
  Vec row_norms_sq_;
  bool dense_storage_ = true;
  RowMatrix A_;  // dense storage
  std::vector<Index> row_ptr_, col_idx_;  // CSR storage
  std::vector<double> values_;
};

/// (Ax - b)^+ with norm, max violation and FSC. A constraint counts as
/// satisfied when a_i'x - b_i <= fsc_tol (default exactly 0).
ResidualSummary positive_residual(const Problem& problem, const Vec& x, double fsc_tol = 0.0);

/// One relaxed orthogonal projection onto constraint `row`:
///   x' = x - delta * (a_i'x - b_i)^+ / ||a_i||^2 * a_i.
/// Identity when the constraint is satisfied. Requires 0 < delta <= 2.
Vec project_step(const Problem& problem, const Vec& x, Index row, double delta);

/// Euclidean distance from x to the box [lower, upper] (componentwise clamp).
double distance_to_box(const Vec& lower, const Vec& upper, const Vec& x);

}  // namespace linfeas
