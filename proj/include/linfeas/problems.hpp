#pragma once

#include <optional>
#include <string>
#include <tuple>

#include "linfeas/problem.hpp"

namespace linfeas {

enum class GenKind { Gaussian, Correlated };

/// Random instance recipe. `mix` is the convex-combination coefficient that
/// builds the right-hand side b = mix * A x1 + (1 - mix) * A x2, which makes
/// the system consistent by construction.
struct GenSpec {
  GenKind kind = GenKind::Gaussian;
  Index m = 0, n = 0;
  double mix = 0.5;
  std::uint64_t seed = 0;
  double low = 0.9, high = 1.0;  // Correlated entry range
};

struct GeneratedProblem {
  Problem problem;
  Vec x1, x2;
  /// mix * x1 + (1 - mix) * x2; satisfies A x = b up to rounding.
  Vec witness() const;
  double mix = 0.0;
};

/// Fill order is fixed (row-major A, then x1, then x2) so instances are
/// reproducible from the seed alone.
GeneratedProblem gen_random(const GenSpec& spec);

/// Homogeneous separability system: row i of A is -labels[i] * features[i],
/// b = 0. A feasible w separates the classes through the origin.
Problem svm_to_feasibility(const RowMatrix& features, const Vec& labels);

/// LP min c'x s.t. A_eq x = b_eq, l <= x <= u with known optimum p_star.
struct LpInstance {
  Vec c;
  RowMatrix a_eq;
  Vec b_eq;
  Vec lower, upper;  // +-inf entries drop the corresponding bound row
  std::optional<double> p_star;
};

/// Stacked feasibility system [A' -A' I -I c]' x <= [b' -b' u' -l' p*]'.
/// Infinite bounds are dropped, not big-M'd.
Problem lp_to_feasibility(const LpInstance& lp);

/// JSON manifest {name, m, n, matrix_path, rhs_path, witness_path?, kind}
/// referencing a Matrix Market file and newline-separated decimal vectors.
/// Floats serialize as shortest round-trip decimals.
Problem load_problem(const std::string& manifest_path);
std::optional<Vec> load_problem_witness(const std::string& manifest_path);
void save_problem(const Problem& problem, const std::string& manifest_path,
                  const std::string& name, const std::optional<Vec>& witness = std::nullopt);

/// LP manifest {c_path, a_eq_path, b_eq_path, l_path, u_path, p_star}.
LpInstance load_lp(const std::string& manifest_path);

// Matrix Market and plain-vector primitives (exposed for tests/tools).
void write_matrix_market(const Problem& problem, const std::string& path);
void write_vector(const Vec& v, const std::string& path);
Vec read_vector(const std::string& path);
std::string format_double(double v);  // shortest round-trip decimal

}  // namespace linfeas
