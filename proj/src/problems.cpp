#include "linfeas/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "linfeas/rng.hpp"

namespace linfeas {

namespace fs = std::filesystem;

Vec GeneratedProblem::witness() const { return mix * x1 + (1.0 - mix) * x2; }

GeneratedProblem gen_random(const GenSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw std::invalid_argument("gen_random: need m, n >= 1");
  if (!(spec.mix >= 0.0 && spec.mix <= 1.0)) {
    throw std::invalid_argument("gen_random: mix must be in [0, 1]");
  }
  if (!(spec.low < spec.high)) throw std::invalid_argument("gen_random: need low < high");

  CounterRng rng(spec.seed);
  auto draw = [&rng, &spec]() {
    return spec.kind == GenKind::Gaussian ? rng.normal() : rng.uniform(spec.low, spec.high);
  };
  RowMatrix A(spec.m, spec.n);
  for (Index i = 0; i < spec.m; ++i) {
    for (Index j = 0; j < spec.n; ++j) A(i, j) = draw();
  }
  Vec x1(spec.n), x2(spec.n);
  for (Index j = 0; j < spec.n; ++j) x1[j] = draw();
  for (Index j = 0; j < spec.n; ++j) x2[j] = draw();

  Vec b = spec.mix * (A * x1) + (1.0 - spec.mix) * (A * x2);
  GeneratedProblem out{Problem::dense(std::move(A), std::move(b)), std::move(x1), std::move(x2),
                       spec.mix};
  return out;
}

Problem svm_to_feasibility(const RowMatrix& features, const Vec& labels) {
  if (features.rows() != labels.size()) {
    throw std::invalid_argument("svm_to_feasibility: features/labels size mismatch");
  }
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw std::invalid_argument("svm_to_feasibility: labels must be +-1");
    }
  }
  RowMatrix A(features.rows(), features.cols());
  for (Index i = 0; i < features.rows(); ++i) A.row(i) = -labels[i] * features.row(i);
  return Problem::dense(std::move(A), Vec::Zero(features.rows()));
}

Problem lp_to_feasibility(const LpInstance& lp) {
  if (!lp.p_star) throw std::invalid_argument("lp_to_feasibility: p_star is required");
  Index m = lp.a_eq.rows(), n = lp.a_eq.cols();
  if (lp.c.size() != n || lp.b_eq.size() != m || lp.lower.size() != n || lp.upper.size() != n) {
    throw std::invalid_argument("lp_to_feasibility: inconsistent dimensions");
  }
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j]) && std::isfinite(lp.upper[j]) && lp.lower[j] > lp.upper[j]) {
      throw std::invalid_argument("lp_to_feasibility: lower > upper");
    }
  }
  Index n_upper = 0, n_lower = 0;
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) ++n_upper;
    if (std::isfinite(lp.lower[j])) ++n_lower;
  }
  Index rows = 2 * m + n_upper + n_lower + 1;
  RowMatrix A = RowMatrix::Zero(rows, n);
  Vec b(rows);
  Index r = 0;
  for (Index i = 0; i < m; ++i, ++r) {
    A.row(r) = lp.a_eq.row(i);
    b[r] = lp.b_eq[i];
  }
  for (Index i = 0; i < m; ++i, ++r) {
    A.row(r) = -lp.a_eq.row(i);
    b[r] = -lp.b_eq[i];
  }
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) {
      A(r, j) = 1.0;
      b[r] = lp.upper[j];
      ++r;
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      A(r, j) = -1.0;
      b[r] = -lp.lower[j];
      ++r;
    }
  }
  A.row(r) = lp.c.transpose();
  b[r] = *lp.p_star;
  return Problem::dense(std::move(A), std::move(b));
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& tok, const std::string& where) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  double v;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw std::runtime_error(where + ": cannot parse number '" + tok + "'");
  }
  return v;
}

struct MatrixPayload {
  Index m = 0, n = 0;
  bool dense = false;
  RowMatrix A;                                    // dense
  std::vector<std::tuple<Index, Index, double>> triplets;  // coordinate
};

MatrixPayload read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path);
  std::string line;
  Index lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix" || field != "real" ||
      symmetry != "general" || (format != "array" && format != "coordinate")) {
    throw std::runtime_error(path + ":1: unsupported Matrix Market header");
  }
  auto next_data_line = [&]() {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] != '%') return true;
    }
    return false;
  };
  if (!next_data_line()) throw std::runtime_error(path + ": missing size line");
  std::istringstream size_line(line);
  MatrixPayload p;
  p.dense = format == "array";
  Index nnz = 0;
  if (p.dense) {
    if (!(size_line >> p.m >> p.n)) throw std::runtime_error(path + ": bad size line");
  } else {
    if (!(size_line >> p.m >> p.n >> nnz)) throw std::runtime_error(path + ": bad size line");
  }
  if (p.m < 1 || p.n < 1) throw std::runtime_error(path + ": invalid dimensions");
  if (p.dense) {
    p.A.resize(p.m, p.n);
    // array format lists entries column by column
    for (Index j = 0; j < p.n; ++j) {
      for (Index i = 0; i < p.m; ++i) {
        if (!next_data_line()) {
          throw std::runtime_error(path + ":" + std::to_string(lineno) + ": truncated array data");
        }
        p.A(i, j) = parse_double(line, path + ":" + std::to_string(lineno));
      }
    }
  } else {
    p.triplets.reserve(nnz);
    for (Index k = 0; k < nnz; ++k) {
      if (!next_data_line()) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": truncated coordinate data");
      }
      std::istringstream entry(line);
      Index i, j;
      std::string val;
      if (!(entry >> i >> j >> val)) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad coordinate entry");
      }
      if (i < 1 || i > p.m || j < 1 || j > p.n) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": index out of range");
      }
      p.triplets.emplace_back(i - 1, j - 1, parse_double(val, path + ":" + std::to_string(lineno)));
    }
  }
  return p;
}

Problem problem_from_payload(MatrixPayload&& p, Vec b) {
  if (p.dense) return Problem::dense(std::move(p.A), std::move(b));
  std::sort(p.triplets.begin(), p.triplets.end());
  std::vector<Index> row_ptr(p.m + 1, 0), col_idx;
  std::vector<double> values;
  col_idx.reserve(p.triplets.size());
  values.reserve(p.triplets.size());
  for (auto& [i, j, v] : p.triplets) {
    ++row_ptr[i + 1];
    col_idx.push_back(j);
    values.push_back(v);
  }
  for (Index i = 0; i < p.m; ++i) row_ptr[i + 1] += row_ptr[i];
  return Problem::csr(p.m, p.n, std::move(row_ptr), std::move(col_idx), std::move(values),
                      std::move(b));
}

}  // namespace

void write_matrix_market(const Problem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (problem.is_dense()) {
    out << "%%MatrixMarket matrix array real general\n";
    out << problem.rows() << " " << problem.cols() << "\n";
    const RowMatrix& A = problem.dense_matrix();
    for (Index j = 0; j < problem.cols(); ++j) {
      for (Index i = 0; i < problem.rows(); ++i) out << format_double(A(i, j)) << "\n";
    }
  } else {
    // Re-derive triplets through the row interface.
    std::vector<std::tuple<Index, Index, double>> triplets;
    Vec e = Vec::Zero(problem.cols());
    for (Index i = 0; i < problem.rows(); ++i) {
      e.setZero();
      problem.add_scaled_row(i, 1.0, e);
      for (Index j = 0; j < problem.cols(); ++j) {
        if (e[j] != 0.0) triplets.emplace_back(i, j, e[j]);
      }
    }
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << problem.rows() << " " << problem.cols() << " " << triplets.size() << "\n";
    for (auto& [i, j, v] : triplets) {
      out << (i + 1) << " " << (j + 1) << " " << format_double(v) << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_vector(const Vec& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path);
}

Vec read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file " + path);
  std::vector<double> vals;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    vals.push_back(parse_double(line, path + ":" + std::to_string(lineno)));
  }
  Vec v(static_cast<Index>(vals.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = vals[i];
  return v;
}

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

std::string resolve(const std::string& manifest_path, const std::string& rel) {
  fs::path p(rel);
  if (p.is_absolute()) return rel;
  return (fs::path(manifest_path).parent_path() / p).string();
}

}  // namespace

Problem load_problem(const std::string& manifest_path) {
  nlohmann::json j = read_json_file(manifest_path);
  for (const char* key : {"m", "n", "matrix_path", "rhs_path"}) {
    if (!j.contains(key)) {
      throw std::runtime_error(manifest_path + ": missing manifest key '" + key + "'");
    }
  }
  MatrixPayload payload = read_matrix_market(resolve(manifest_path, j["matrix_path"]));
  Index m = j["m"].get<Index>(), n = j["n"].get<Index>();
  if (payload.m != m || payload.n != n) {
    throw std::runtime_error(manifest_path + ": manifest says " + std::to_string(m) + "x" +
                             std::to_string(n) + " but matrix payload is " +
                             std::to_string(payload.m) + "x" + std::to_string(payload.n));
  }
  Vec b = read_vector(resolve(manifest_path, j["rhs_path"]));
  if (b.size() != m) {
    throw std::runtime_error(manifest_path + ": rhs length " + std::to_string(b.size()) +
                             " does not match m=" + std::to_string(m));
  }
  return problem_from_payload(std::move(payload), std::move(b));
}

std::optional<Vec> load_problem_witness(const std::string& manifest_path) {
  nlohmann::json j = read_json_file(manifest_path);
  if (!j.contains("witness_path")) return std::nullopt;
  return read_vector(resolve(manifest_path, j["witness_path"]));
}

void save_problem(const Problem& problem, const std::string& manifest_path,
                  const std::string& name, const std::optional<Vec>& witness) {
  fs::path dir = fs::path(manifest_path).parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  std::string stem = fs::path(manifest_path).stem().string();
  std::string matrix_file = stem + ".mtx";
  std::string rhs_file = stem + ".rhs.txt";
  write_matrix_market(problem, (dir / matrix_file).string());
  write_vector(problem.rhs(), (dir / rhs_file).string());
  nlohmann::json j;
  j["name"] = name;
  j["m"] = problem.rows();
  j["n"] = problem.cols();
  j["matrix_path"] = matrix_file;
  j["rhs_path"] = rhs_file;
  j["kind"] = problem.is_dense() ? "dense" : "sparse";
  if (witness) {
    std::string witness_file = stem + ".witness.txt";
    write_vector(*witness, (dir / witness_file).string());
    j["witness_path"] = witness_file;
  }
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot write manifest " + manifest_path);
  out << j.dump(2) << "\n";
}

LpInstance load_lp(const std::string& manifest_path) {
  nlohmann::json j = read_json_file(manifest_path);
  for (const char* key : {"c_path", "a_eq_path", "b_eq_path", "l_path", "u_path"}) {
    if (!j.contains(key)) {
      throw std::runtime_error(manifest_path + ": missing LP manifest key '" + key + "'");
    }
  }
  LpInstance lp;
  MatrixPayload payload = read_matrix_market(resolve(manifest_path, j["a_eq_path"]));
  if (payload.dense) {
    lp.a_eq = std::move(payload.A);
  } else {
    lp.a_eq = RowMatrix::Zero(payload.m, payload.n);
    for (auto& [i, jj, v] : payload.triplets) lp.a_eq(i, jj) += v;
  }
  lp.c = read_vector(resolve(manifest_path, j["c_path"]));
  lp.b_eq = read_vector(resolve(manifest_path, j["b_eq_path"]));
  lp.lower = read_vector(resolve(manifest_path, j["l_path"]));
  lp.upper = read_vector(resolve(manifest_path, j["u_path"]));
  if (j.contains("p_star")) lp.p_star = j["p_star"].get<double>();
  return lp;
}

}  // namespace linfeas
