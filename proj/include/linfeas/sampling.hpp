#pragma once

#include <optional>
#include <vector>

#include "linfeas/problem.hpp"
#include "linfeas/rng.hpp"

namespace linfeas {

/// Result of the max-violation pick over a sampled constraint set.
struct SampleSelection {
  std::vector<Index> subset;
  std::optional<Index> chosen;  // absent when every sampled constraint holds
  double violation = 0.0;       // (a_i*'x - b_i*)^+
};

/// Weights of the sorted-residual expectation: weights[j] is the mass the
/// sampling distribution puts on the (beta+j)-th smallest residual,
/// C(beta-1+j, beta-1) / C(m, beta) for j = 0..m-beta.
struct SamplingWeights {
  Index beta = 0;
  Index m = 0;
  std::vector<double> weights;
};

/// Reusable permutation buffer for repeated subset draws. The array stays a
/// permutation of 0..m-1 between draws, so every draw is still uniform over
/// all C(m, beta) subsets while touching only beta slots.
struct SubsetScratch {
  std::vector<Index> perm;
};

/// Uniform random beta-subset of {0..m-1} (fresh buffer, sorted ascending).
std::vector<Index> sample_subset(Index m, Index beta, CounterRng& rng);

/// In-place variant used by the solver loop; `out` holds the subset, unsorted.
/// Consumes no randomness when beta == m.
void sample_subset(SubsetScratch& scratch, Index m, Index beta, CounterRng& rng,
                   std::vector<Index>& out);

/// argmax over the subset of the positive residuals; ties broken by the
/// smallest row index. `chosen` is absent when the max is <= 0.
SampleSelection select_max_violated(const Problem& problem, const Vec& x,
                                    const std::vector<Index>& subset);

SamplingWeights sampling_weights(Index m, Index beta);

/// f(x) = E_S[ 1/2 |(a_i*'x - b_i*)^+|^2 ], evaluated exactly by sorting the
/// positive residuals and applying sampling_weights.
double expected_loss_exact(const Problem& problem, const Vec& x, Index beta);

/// grad f(x) = E_S[ (a_i*'x - b_i*)^+ a_i* ]. Ties in the residual values are
/// resolved by the canonical (value, row index) sort order.
Vec expected_gradient_exact(const Problem& problem, const Vec& x, Index beta);

/// Independent oracle: enumerate all C(m, beta) subsets and average the
/// half-squared maxima. Guarded to C(m, beta) <= 1e6.
double expected_loss_bruteforce(const Problem& problem, const Vec& x, Index beta);

/// C(m, beta) in floating point (inf on overflow); used by the guard.
double binomial(Index m, Index beta);

}  // namespace linfeas
