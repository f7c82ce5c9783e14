#include "linfeas/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace linfeas {

namespace {
constexpr double kZeroRowThreshold = 1e-300;
}

Problem Problem::dense(RowMatrix A, Vec b) {
  if (A.rows() < 1 || A.cols() < 1) {
    throw std::invalid_argument("Problem: need m >= 1 and n >= 1");
  }
  if (b.size() != A.rows()) {
    throw std::invalid_argument("Problem: length(b) != m");
  }
  Problem p;
  p.m_ = A.rows();
  p.n_ = A.cols();
  p.A_ = std::move(A);
  p.b_ = std::move(b);
  p.dense_storage_ = true;
  p.finalize_norms();
  return p;
}

Problem Problem::csr(Index m, Index n, std::vector<Index> row_ptr,
                     std::vector<Index> col_idx, std::vector<double> values, Vec b) {
  if (m < 1 || n < 1) throw std::invalid_argument("Problem: need m >= 1 and n >= 1");
  if (b.size() != m) throw std::invalid_argument("Problem: length(b) != m");
  if (static_cast<Index>(row_ptr.size()) != m + 1) {
    throw std::invalid_argument("Problem: row_ptr must have m+1 entries");
  }
  if (col_idx.size() != values.size() || row_ptr.back() != static_cast<Index>(values.size())) {
    throw std::invalid_argument("Problem: inconsistent CSR arrays");
  }
  for (Index i = 0; i < m; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw std::invalid_argument("Problem: row_ptr not nondecreasing");
  }
  for (Index c : col_idx) {
    if (c < 0 || c >= n) throw std::invalid_argument("Problem: column index out of range");
  }
  Problem p;
  p.m_ = m;
  p.n_ = n;
  p.b_ = std::move(b);
  p.row_ptr_ = std::move(row_ptr);
  p.col_idx_ = std::move(col_idx);
  p.values_ = std::move(values);
  p.dense_storage_ = false;
  p.finalize_norms();
  return p;
}

void Problem::finalize_norms() {
  row_norms_sq_.resize(m_);
  for (Index i = 0; i < m_; ++i) {
    double s = 0.0;
    if (dense_storage_) {
      s = A_.row(i).squaredNorm();
    } else {
      for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * values_[k];
    }
    if (!(s >= kZeroRowThreshold)) {
      throw std::invalid_argument("Problem: zero row at index " + std::to_string(i));
    }
    row_norms_sq_[i] = s;
  }
}

const RowMatrix& Problem::dense_matrix() const {
  if (!dense_storage_) throw std::logic_error("Problem: dense_matrix() on CSR storage");
  return A_;
}

double Problem::row_dot(Index i, const Vec& x) const {
  if (dense_storage_) return A_.row(i).dot(x);
  double s = 0.0;
  for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
  return s;
}

void Problem::add_scaled_row(Index i, double c, Vec& x) const {
  if (dense_storage_) {
    x += c * A_.row(i).transpose();
    return;
  }
  for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) x[col_idx_[k]] += c * values_[k];
}

void Problem::residual_into(const Vec& x, Vec& r) const {
  if (x.size() != n_) throw std::invalid_argument("residual: dimension mismatch");
  if (dense_storage_) {
    r.noalias() = A_ * x;
    r -= b_;
    return;
  }
  r.resize(m_);
  for (Index i = 0; i < m_; ++i) r[i] = row_dot(i, x) - b_[i];
}

ResidualStats Problem::residual_stats(const Vec& x, double fsc_tol) const {
  Vec r;
  residual_into(x, r);
  ResidualStats s;
  s.max_raw = -std::numeric_limits<double>::infinity();
  double sum_sq = 0.0;
  Index satisfied = 0;
  for (Index i = 0; i < m_; ++i) {
    double ri = r[i];
    if (ri > s.max_raw) s.max_raw = ri;
    if (ri <= fsc_tol) ++satisfied;
    if (ri > 0.0) sum_sq += ri * ri;
  }
  s.norm2 = std::sqrt(sum_sq);
  s.theta = s.max_raw > 0.0 ? s.max_raw : 0.0;
  s.fsc = static_cast<double>(satisfied) / static_cast<double>(m_);
  return s;
}

Eigen::MatrixXd Problem::gram() const {
  if (dense_storage_) return A_.transpose() * A_;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_, n_);
  for (Index i = 0; i < m_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      for (Index l = row_ptr_[i]; l < row_ptr_[i + 1]; ++l) {
        g(col_idx_[k], col_idx_[l]) += values_[k] * values_[l];
      }
    }
  }
  return g;
}

double Problem::max_row_norm() const {
  double m2 = 0.0;
  for (Index i = 0; i < m_; ++i) m2 = std::max(m2, row_norms_sq_[i]);
  return std::sqrt(m2);
}

ResidualSummary positive_residual(const Problem& problem, const Vec& x, double fsc_tol) {
  if (x.size() != problem.cols()) {
    throw std::invalid_argument("positive_residual: dimension mismatch");
  }
  Vec r;
  problem.residual_into(x, r);
  ResidualSummary out;
  out.positive_residual = r.cwiseMax(0.0);
  out.norm2 = out.positive_residual.norm();
  out.theta = out.positive_residual.maxCoeff();
  Index satisfied = 0;
  for (Index i = 0; i < problem.rows(); ++i) {
    if (r[i] <= fsc_tol) ++satisfied;
  }
  out.fsc = static_cast<double>(satisfied) / static_cast<double>(problem.rows());
  return out;
}

Vec project_step(const Problem& problem, const Vec& x, Index row, double delta) {
  if (row < 0 || row >= problem.rows()) throw std::out_of_range("project_step: row index");
  if (!(delta > 0.0 && delta <= 2.0)) throw std::invalid_argument("project_step: delta must be in (0, 2]");
  double r = problem.row_dot(row, x) - problem.rhs()[row];
  if (r <= 0.0) return x;
  Vec out = x;
  problem.add_scaled_row(row, -delta * r / problem.row_norm_sq(row), out);
  return out;
}

double distance_to_box(const Vec& lower, const Vec& upper, const Vec& x) {
  if (lower.size() != upper.size() || lower.size() != x.size()) {
    throw std::invalid_argument("distance_to_box: dimension mismatch");
  }
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (lower[i] > upper[i]) throw std::invalid_argument("distance_to_box: lower > upper");
    double d = 0.0;
    if (x[i] < lower[i]) d = lower[i] - x[i];
    else if (x[i] > upper[i]) d = x[i] - upper[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace linfeas
