#include "linfeas/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace linfeas {

namespace {

void check_beta(Index m, Index beta) {
  if (beta < 1 || beta > m) {
    throw std::invalid_argument("sampling: beta must satisfy 1 <= beta <= m");
  }
}

}  // namespace

std::vector<Index> sample_subset(Index m, Index beta, CounterRng& rng) {
  check_beta(m, beta);
  SubsetScratch scratch;
  std::vector<Index> out;
  sample_subset(scratch, m, beta, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

void sample_subset(SubsetScratch& scratch, Index m, Index beta, CounterRng& rng,
                   std::vector<Index>& out) {
  check_beta(m, beta);
  auto& perm = scratch.perm;
  if (static_cast<Index>(perm.size()) != m) {
    perm.resize(m);
    std::iota(perm.begin(), perm.end(), Index{0});
  }
  out.resize(beta);
  if (beta == m) {
    // Full set: deterministic, no randomness consumed.
    std::iota(out.begin(), out.end(), Index{0});
    return;
  }
  for (Index i = 0; i < beta; ++i) {
    Index j = i + static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(m - i)));
    std::swap(perm[i], perm[j]);
    out[i] = perm[i];
  }
}

SampleSelection select_max_violated(const Problem& problem, const Vec& x,
                                    const std::vector<Index>& subset) {
  SampleSelection sel;
  sel.subset = subset;
  double best = 0.0;
  Index best_row = -1;
  for (Index i : subset) {
    double r = problem.row_dot(i, x) - problem.rhs()[i];
    if (r > best || (r == best && r > 0.0 && i < best_row)) {
      best = r;
      best_row = i;
    }
  }
  if (best_row >= 0) {
    sel.chosen = best_row;
    sel.violation = best;
  }
  return sel;
}

SamplingWeights sampling_weights(Index m, Index beta) {
  check_beta(m, beta);
  SamplingWeights w;
  w.m = m;
  w.beta = beta;
  Index len = m - beta + 1;
  w.weights.assign(len, 0.0);
  // Run the recurrence w_{j+1}/w_j = (beta+j)/(j+1) backwards from the
  // largest weight to keep everything in [0, 1]; the forward products
  // overflow for large m.
  w.weights[len - 1] = 1.0;
  for (Index j = len - 2; j >= 0; --j) {
    w.weights[j] = w.weights[j + 1] * static_cast<double>(j + 1) / static_cast<double>(beta + j);
  }
  double sum = 0.0;
  for (Index j = 0; j < len; ++j) sum += w.weights[j];  // ascending, smallest first
  for (auto& v : w.weights) v /= sum;
  return w;
}

namespace {

std::vector<double> sorted_positive_residuals(const Problem& problem, const Vec& x) {
  Vec r;
  problem.residual_into(x, r);
  std::vector<double> pos(problem.rows());
  for (Index i = 0; i < problem.rows(); ++i) pos[i] = std::max(r[i], 0.0);
  std::sort(pos.begin(), pos.end());
  return pos;
}

}  // namespace

double expected_loss_exact(const Problem& problem, const Vec& x, Index beta) {
  Index m = problem.rows();
  check_beta(m, beta);
  std::vector<double> pos = sorted_positive_residuals(problem, x);
  SamplingWeights w = sampling_weights(m, beta);
  double f = 0.0;
  for (Index j = 0; j < m - beta + 1; ++j) {
    double r = pos[beta - 1 + j];
    f += w.weights[j] * r * r;
  }
  return 0.5 * f;
}

Vec expected_gradient_exact(const Problem& problem, const Vec& x, Index beta) {
  Index m = problem.rows();
  check_beta(m, beta);
  Vec r;
  problem.residual_into(x, r);
  std::vector<std::pair<double, Index>> order(m);
  for (Index i = 0; i < m; ++i) order[i] = {std::max(r[i], 0.0), i};
  std::sort(order.begin(), order.end());
  SamplingWeights w = sampling_weights(m, beta);
  Vec grad = Vec::Zero(problem.cols());
  for (Index j = 0; j < m - beta + 1; ++j) {
    auto [val, row] = order[beta - 1 + j];
    if (val > 0.0) problem.add_scaled_row(row, w.weights[j] * val, grad);
  }
  return grad;
}

double binomial(Index m, Index beta) {
  double c = 1.0;
  Index k = std::min(beta, m - beta);
  for (Index j = 1; j <= k; ++j) {
    c *= static_cast<double>(m - k + j) / static_cast<double>(j);
  }
  return c;
}

double expected_loss_bruteforce(const Problem& problem, const Vec& x, Index beta) {
  Index m = problem.rows();
  check_beta(m, beta);
  double count = binomial(m, beta);
  if (!(count <= 1e6)) {
    throw std::invalid_argument("expected_loss_bruteforce: C(m, beta) exceeds 1e6 guard");
  }
  Vec r;
  problem.residual_into(x, r);
  std::vector<double> pos(m);
  for (Index i = 0; i < m; ++i) pos[i] = std::max(r[i], 0.0);

  std::vector<Index> idx(beta);
  std::iota(idx.begin(), idx.end(), Index{0});
  double sum = 0.0;
  std::uint64_t subsets = 0;
  for (;;) {
    double mx = 0.0;
    for (Index i : idx) mx = std::max(mx, pos[i]);
    sum += 0.5 * mx * mx;
    ++subsets;
    // next combination in lexicographic order
    Index i = beta - 1;
    while (i >= 0 && idx[i] == m - beta + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (Index j = i + 1; j < beta; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sum / static_cast<double>(subsets);
}

}  // namespace linfeas
