#include <map>
#include <numeric>

#include "doctest.h"
#include "linfeas/sampling.hpp"

using namespace linfeas;

namespace {

Problem identity_problem(Index n, const Vec& b) {
  RowMatrix A = RowMatrix::Identity(n, n);
  return Problem::dense(A, b);
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

// Test-side oracle: subset argmax in the canonical (value, row) order, the
// tie rule the sorted-expectation weighting induces.
Vec gradient_bruteforce(const Problem& p, const Vec& x, Index beta) {
  Index m = p.rows();
  Vec r;
  p.residual_into(x, r);
  std::vector<double> pos(m);
  for (Index i = 0; i < m; ++i) pos[i] = std::max(r[i], 0.0);
  std::vector<Index> idx(beta);
  std::iota(idx.begin(), idx.end(), Index{0});
  Vec sum = Vec::Zero(p.cols());
  double count = 0.0;
  for (;;) {
    Index best = idx[0];
    for (Index i : idx) {
      if (pos[i] > pos[best] || (pos[i] == pos[best] && i > best)) best = i;
    }
    if (pos[best] > 0.0) p.add_scaled_row(best, pos[best], sum);
    count += 1.0;
    Index i = beta - 1;
    while (i >= 0 && idx[i] == m - beta + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (Index j = i + 1; j < beta; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sum / count;
}

}  // namespace

TEST_CASE("sample_subset basics") {
  CounterRng rng(1);
  CHECK(sample_subset(5, 5, rng) == std::vector<Index>{0, 1, 2, 3, 4});
  CHECK(sample_subset(1, 1, rng) == std::vector<Index>{0});
  CHECK_THROWS_AS(sample_subset(4, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_subset(4, 5, rng), std::invalid_argument);
}

TEST_CASE("sample_subset is uniform over all C(4,2) subsets") {
  CounterRng rng(42);
  std::map<std::vector<Index>, int> counts;
  const int draws = 60000;
  for (int t = 0; t < draws; ++t) {
    counts[sample_subset(4, 2, rng)]++;
  }
  CHECK(counts.size() == 6);
  for (const auto& [subset, c] : counts) {
    double freq = static_cast<double>(c) / draws;
    CHECK(freq == doctest::Approx(1.0 / 6.0).epsilon(0.06));
    CHECK(std::abs(freq - 1.0 / 6.0) < 0.01);
  }
}

TEST_CASE("persistent-scratch sampling stays uniform across draws") {
  CounterRng rng(9);
  SubsetScratch scratch;
  std::vector<Index> out;
  std::map<std::vector<Index>, int> counts;
  const int draws = 60000;
  for (int t = 0; t < draws; ++t) {
    sample_subset(scratch, 4, 2, rng, out);
    std::vector<Index> key = out;
    std::sort(key.begin(), key.end());
    counts[key]++;
  }
  CHECK(counts.size() == 6);
  for (const auto& [subset, c] : counts) {
    CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 6.0) < 0.01);
  }
}

TEST_CASE("select_max_violated rules") {
  Vec b = Vec::Zero(4);
  Problem p = identity_problem(4, b);

  SUBCASE("all satisfied -> absent") {
    Vec x = Vec::Constant(4, -1.0);
    SampleSelection sel = select_max_violated(p, x, {0, 1, 2});
    CHECK(!sel.chosen.has_value());
    CHECK(sel.violation == 0.0);
  }
  SUBCASE("ties break to the smallest row index") {
    Vec x(4);
    x << 0.0, 2.0, 0.0, 2.0;
    SampleSelection sel = select_max_violated(p, x, {3, 1});
    CHECK(*sel.chosen == 1);
    CHECK(sel.violation == 2.0);
  }
  SUBCASE("strict argmax") {
    Vec x(4);
    x << 0.5, 3.0, 1.0, -1.0;
    SampleSelection sel = select_max_violated(p, x, {0, 1, 2});
    CHECK(*sel.chosen == 1);
    CHECK(sel.violation == 3.0);
  }
}

TEST_CASE("sampling_weights worked examples") {
  SamplingWeights w = sampling_weights(4, 2);
  REQUIRE(w.weights.size() == 3);
  CHECK(w.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(w.weights[1] == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
  CHECK(w.weights[2] == doctest::Approx(3.0 / 6.0).epsilon(1e-14));

  SamplingWeights full = sampling_weights(17, 17);
  REQUIRE(full.weights.size() == 1);
  CHECK(full.weights[0] == 1.0);

  SamplingWeights uni = sampling_weights(4, 1);
  for (double v : uni.weights) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("sampling_weights normalization and monotonicity up to m=2000") {
  for (Index m : {Index{10}, Index{100}, Index{2000}}) {
    for (Index beta : {Index{1}, Index{2}, m / 2, m}) {
      SamplingWeights w = sampling_weights(m, beta);
      double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      for (size_t j = 1; j < w.weights.size(); ++j) {
        CHECK(w.weights[j] >= w.weights[j - 1]);
      }
    }
  }
}

TEST_CASE("expected loss exact: frozen worked examples") {
  Vec b = Vec::Zero(4);
  Problem p = identity_problem(4, b);
  Vec x(4);
  x << 0.0, 1.0, 2.0, 3.0;
  CHECK(expected_loss_exact(p, x, 2) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(expected_loss_exact(p, x, 4) == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(expected_loss_exact(p, x, 1) == doctest::Approx(1.75).epsilon(1e-14));
}

TEST_CASE("expected loss exact equals brute force for all m <= 8") {
  CounterRng rng(123);
  for (Index m = 1; m <= 8; ++m) {
    Problem p = random_problem(m, 3, rng);
    for (Index beta = 1; beta <= m; ++beta) {
      for (int t = 0; t < 20; ++t) {
        Vec x(3);
        for (Index j = 0; j < 3; ++j) x[j] = 2.0 * rng.normal();
        double exact = expected_loss_exact(p, x, beta);
        double brute = expected_loss_bruteforce(p, x, beta);
        CHECK(exact == doctest::Approx(brute).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("brute force limits: beta=m is half theta^2, beta=1 is the mean") {
  CounterRng rng(77);
  Problem p = random_problem(6, 2, rng);
  Vec x(2);
  x << 1.0, -2.0;
  ResidualSummary r = positive_residual(p, x);
  CHECK(expected_loss_bruteforce(p, x, 6) == doctest::Approx(0.5 * r.theta * r.theta).epsilon(1e-13));
  double mean_sq = r.positive_residual.squaredNorm() / 6.0;
  CHECK(expected_loss_bruteforce(p, x, 1) == doctest::Approx(0.5 * mean_sq).epsilon(1e-13));
  CHECK_THROWS_AS(expected_loss_bruteforce(random_problem(60, 2, rng), x, 30),
                  std::invalid_argument);
}

TEST_CASE("loss is monotone in beta") {
  CounterRng rng(31);
  Problem p = random_problem(7, 3, rng);
  for (int t = 0; t < 10; ++t) {
    Vec x(3);
    for (Index j = 0; j < 3; ++j) x[j] = 2.0 * rng.normal();
    double prev = expected_loss_exact(p, x, 1);
    for (Index beta = 2; beta <= 7; ++beta) {
      double cur = expected_loss_exact(p, x, beta);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("expected gradient: frozen examples and brute-force agreement") {
  Vec b = Vec::Zero(4);
  Problem p = identity_problem(4, b);
  Vec x(4);
  x << 0.0, 1.0, 2.0, 3.0;

  Vec g4 = expected_gradient_exact(p, x, 4);
  Vec expect4(4);
  expect4 << 0.0, 0.0, 0.0, 3.0;
  CHECK((g4 - expect4).lpNorm<Eigen::Infinity>() <= 1e-14);

  Vec g2 = expected_gradient_exact(p, x, 2);
  Vec expect2(4);
  expect2 << 0.0, 1.0 / 6.0, 2.0 / 3.0, 1.5;
  CHECK((g2 - expect2).lpNorm<Eigen::Infinity>() <= 1e-14);

  Vec feasible = Vec::Constant(4, -1.0);
  CHECK(expected_gradient_exact(p, feasible, 2).isZero(0.0));

  CounterRng rng(55);
  for (Index m = 2; m <= 7; ++m) {
    Problem q = random_problem(m, 3, rng);
    for (Index beta = 1; beta <= m; ++beta) {
      Vec y(3);
      for (Index j = 0; j < 3; ++j) y[j] = 2.0 * rng.normal();
      Vec exact = expected_gradient_exact(q, y, beta);
      Vec brute = gradient_bruteforce(q, y, beta);
      CHECK((exact - brute).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  }
}

TEST_CASE("gradient matches central finite differences of the exact loss") {
  CounterRng rng(999);
  Problem p = random_problem(6, 3, rng);
  const double step = 1e-6;
  int checked = 0;
  for (int t = 0; t < 40 && checked < 10; ++t) {
    Vec x(3);
    for (Index j = 0; j < 3; ++j) x[j] = 2.0 * rng.normal();
    // keep away from kinks and ties of the piecewise-smooth loss
    Vec r;
    p.residual_into(x, r);
    bool smooth = true;
    for (Index i = 0; i < 6 && smooth; ++i) {
      if (std::abs(r[i]) < 1e-3) smooth = false;
      for (Index l = i + 1; l < 6; ++l) {
        if (std::abs(r[i] - r[l]) < 1e-3) smooth = false;
      }
    }
    if (!smooth) continue;
    ++checked;
    for (Index beta : {Index{1}, Index{3}, Index{6}}) {
      Vec grad = expected_gradient_exact(p, x, beta);
      for (Index j = 0; j < 3; ++j) {
        Vec xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        double fd = (expected_loss_exact(p, xp, beta) - expected_loss_exact(p, xm, beta)) /
                    (2.0 * step);
        CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
  CHECK(checked >= 5);
}
