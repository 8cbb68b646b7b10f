#include "msturm/io.hpp"

#include "msturm/errors.hpp"

#include <cstdio>
#include <fstream>

namespace msturm {

using nlohmann::json;

namespace {

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw SchemaError(std::string(what) + ": expected a matrix (array of rows)");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) {
      throw SchemaError(std::string(what) + ": ragged matrix rows");
    }
    for (int c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw SchemaError(std::string(what) + ": non-numeric entry");
      m(i, c) = j[i][c].get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected an array");
  Vector v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(std::string(what) + ": non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// vector_valued: payload entries are n-vectors rather than matrices.
CurveSpec curve_from_json(const json& j, int n, bool vector_valued, const char* what) {
  if (!j.is_object() || !j.contains("kind")) {
    throw SchemaError(std::string(what) + ": curve needs a \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto entry = [&](const json& e) -> Matrix {
    Matrix m = vector_valued ? Matrix(vector_from_json(e, what)) : matrix_from_json(e, what);
    if (m.rows() != n || m.cols() != (vector_valued ? 1 : n)) {
      throw SchemaError(std::string(what) + ": entry has the wrong shape");
    }
    return m;
  };
  try {
    if (kind == "constant") {
      if (!j.contains("value")) throw SchemaError(std::string(what) + ": missing \"value\"");
      return CurveSpec::constant(entry(j["value"]));
    }
    if (kind == "polynomial") {
      if (!j.contains("coefficients") || !j["coefficients"].is_array() ||
          j["coefficients"].empty()) {
        throw SchemaError(std::string(what) + ": missing \"coefficients\"");
      }
      std::vector<Matrix> coeffs;
      for (const auto& c : j["coefficients"]) coeffs.push_back(entry(c));
      return CurveSpec::polynomial(std::move(coeffs));
    }
    if (kind == "sampled") {
      if (!j.contains("samples") || !j["samples"].is_array()) {
        throw SchemaError(std::string(what) + ": missing \"samples\"");
      }
      std::vector<Matrix> samples;
      for (const auto& s : j["samples"]) samples.push_back(entry(s));
      return CurveSpec::sampled(std::move(samples));
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
  throw SchemaError(std::string(what) + ": unknown curve kind \"" + kind + "\"");
}

json curve_to_json(const CurveSpec& curve, bool vector_valued) {
  json out;
  auto entry = [&](const Matrix& m) {
    return vector_valued ? vector_to_json(m.col(0)) : matrix_to_json(m);
  };
  switch (curve.kind()) {
    case CurveKind::constant:
      out["kind"] = "constant";
      out["value"] = entry(curve.payload()[0]);
      break;
    case CurveKind::polynomial: {
      out["kind"] = "polynomial";
      json cs = json::array();
      for (const auto& c : curve.payload()) cs.push_back(entry(c));
      out["coefficients"] = std::move(cs);
      break;
    }
    case CurveKind::sampled: {
      out["kind"] = "sampled";
      json ss = json::array();
      for (const auto& s : curve.payload()) ss.push_back(entry(s));
      out["samples"] = std::move(ss);
      break;
    }
  }
  return out;
}

SubspaceBasis subspace_from_json(const json& j, int n, double rank_tol, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected an array of vectors");
  std::vector<Vector> vecs;
  for (const auto& row : j) {
    Vector v = vector_from_json(row, what);
    if (v.size() != n) throw SchemaError(std::string(what) + ": basis vector of wrong length");
    vecs.push_back(std::move(v));
  }
  try {
    return SubspaceBasis(n, std::move(vecs), rank_tol);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

json subspace_to_json(const SubspaceBasis& sub) {
  json out = json::array();
  for (const auto& v : sub.vectors()) out.push_back(vector_to_json(v));
  return out;
}

}  // namespace

MorseSturmProblem problem_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("problem: expected a JSON object");
  for (const char* key : {"n", "g", "R", "Y", "P", "S_P"}) {
    if (!j.contains(key)) throw SchemaError(std::string("problem: missing key \"") + key + "\"");
  }
  const int n = j["n"].get<int>();
  if (n < 2) throw SchemaError("problem: n must be >= 2");

  Tolerances tol;
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (t.contains("ode_steps")) tol.ode_steps = t["ode_steps"].get<int>();
    if (t.contains("rank_tol")) tol.rank_tol = t["rank_tol"].get<double>();
    if (t.contains("kernel_tol")) tol.kernel_tol = t["kernel_tol"].get<double>();
    if (t.contains("bisect_tol")) tol.bisect_tol = t["bisect_tol"].get<double>();
  }

  Matrix g_entries = matrix_from_json(j["g"], "g");
  if (g_entries.rows() != n) throw SchemaError("problem: g has the wrong dimension");

  try {
    MetricForm g(g_entries, tol.kernel_tol);
    CurveSpec R = curve_from_json(j["R"], n, false, "R");
    CurveSpec Y = curve_from_json(j["Y"], n, true, "Y");
    SubspaceBasis P = subspace_from_json(j["P"], n, tol.rank_tol, "P");
    Matrix S_P = P.dim() == 0 ? Matrix(0, 0) : matrix_from_json(j["S_P"], "S_P");
    if (P.dim() == 0 && j["S_P"].is_array() && !j["S_P"].empty()) {
      throw SchemaError("problem: S_P must be empty when P = {0}");
    }

    std::optional<SubspaceBasis> Q;
    std::optional<Matrix> S_Q;
    if (j.contains("Q") && !j["Q"].is_null()) {
      Q = subspace_from_json(j["Q"], n, tol.rank_tol, "Q");
      if (j.contains("S_Q") && !j["S_Q"].is_null() && Q->dim() > 0) {
        S_Q = matrix_from_json(j["S_Q"], "S_Q");
      } else {
        S_Q = Matrix::Zero(Q->dim(), Q->dim());
      }
    }
    return MorseSturmProblem(std::move(g), std::move(R), std::move(Y), std::move(P),
                             std::move(S_P), std::move(Q), std::move(S_Q), tol);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("problem: ") + e.what());
  }
}

json problem_to_json(const MorseSturmProblem& problem) {
  json j;
  j["n"] = problem.dim();
  j["g"] = matrix_to_json(problem.g().entries());
  j["R"] = curve_to_json(problem.R(), false);
  j["Y"] = curve_to_json(problem.Y(), true);
  j["P"] = subspace_to_json(problem.P());
  j["S_P"] = problem.P().dim() == 0 ? json::array() : matrix_to_json(problem.S_P());
  if (problem.has_Q()) {
    j["Q"] = subspace_to_json(problem.Q());
    j["S_Q"] = problem.Q().dim() == 0 ? json::array() : matrix_to_json(problem.S_Q());
  }
  j["tolerances"] = {{"ode_steps", problem.tol().ode_steps},
                     {"rank_tol", problem.tol().rank_tol},
                     {"kernel_tol", problem.tol().kernel_tol},
                     {"bisect_tol", problem.tol().bisect_tol}};
  return j;
}

MorseSturmProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("problem file is not valid JSON: " + std::string(e.what()));
  }
  return problem_from_json(j);
}

void save_problem(const MorseSturmProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write problem file: " + path);
  out << problem_to_json(problem).dump(2) << "\n";
}

json to_json(const ValidationReport& report) {
  return json{{"ok", report.ok},
              {"regime", to_string(report.regime)},
              {"classification",
               {{"kind", to_string(report.classification.kind)},
                {"m_at_zero_norm", report.classification.m_at_zero_norm},
                {"max_m_norm", report.classification.max_m_norm}}},
              {"y0_orthogonal_to_P", report.y0_orthogonal_to_P},
              {"max_jacobi_residual", report.max_jacobi_residual},
              {"failures", report.failures},
              {"notes", report.notes}};
}

json to_json(const FocalReport& report) {
  json instants = json::array();
  for (const auto& inst : report.instants) {
    instants.push_back({{"t", inst.t},
                        {"multiplicity", inst.multiplicity},
                        {"residual", inst.residual},
                        {"nondegenerate", inst.nondegenerate}});
  }
  return json{{"kind", report.kind}, {"instants", std::move(instants)}};
}

json to_json(const IndexResult& result) {
  return json{{"n_minus", result.n_minus},
              {"nullity", result.nullity},
              {"mesh_size", result.mesh_size},
              {"sigma", result.sigma},
              {"smallest_abs_eigenvalue", result.smallest_abs_eigenvalue}};
}

json to_json(const Inertia& inertia) {
  return json{{"n_minus", inertia.n_minus}, {"n_zero", inertia.n_zero},
              {"n_plus", inertia.n_plus}};
}

json to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const auto& c : report.distribution_checks) {
    checks.push_back({{"id", c.id}, {"applicable", c.applicable}, {"pass", c.pass},
                      {"detail", c.detail}});
  }
  return json{
      {"regime", to_string(report.regime)},
      {"index_theorem",
       {{"applicable", report.index_theorem.applicable},
        {"lhs", report.index_theorem.lhs},
        {"rhs", report.index_theorem.rhs},
        {"pass", report.index_theorem.pass},
        {"detail", report.index_theorem.detail}}},
      {"two_endpoint",
       {{"applicable", report.two_endpoint.applicable},
        {"hypothesis_ok", report.two_endpoint.hypothesis_ok},
        {"lhs", report.two_endpoint.lhs},
        {"rhs", report.two_endpoint.rhs},
        {"correction", to_json(report.two_endpoint.correction)},
        {"pass", report.two_endpoint.pass},
        {"detail", report.two_endpoint.detail}}},
      {"singular_reduction",
       {{"applicable", report.singular_reduction.applicable},
        {"lhs", report.singular_reduction.lhs},
        {"rhs", report.singular_reduction.rhs},
        {"epsilon", report.singular_reduction.epsilon},
        {"pass", report.singular_reduction.pass},
        {"detail", report.singular_reduction.detail}}},
      {"jump_sum",
       {{"applicable", report.jump_sum.applicable},
        {"lhs", report.jump_sum.lhs},
        {"rhs", report.jump_sum.rhs},
        {"pass", report.jump_sum.pass},
        {"detail", report.jump_sum.detail}}},
      {"distribution_checks", std::move(checks)},
      {"focal", to_json(report.scan.focal)},
      {"pseudo_focal", to_json(report.scan.pseudo_focal)},
      {"all_pass", report.all_pass()}};
}

json scan_summary_json(const IndexScan& scan) {
  return json{{"mesh_size", scan.mesh_size},
              {"grid_size", scan.sigma_grid.size()},
              {"sigma_min", scan.sigma_grid.front()},
              {"mu_at_1", scan.mu.back()},
              {"mu0_at_1", scan.mu0.back()},
              {"focal", to_json(scan.focal)},
              {"pseudo_focal", to_json(scan.pseudo_focal)}};
}

std::string scan_to_csv(const IndexScan& scan) {
  std::string out = "sigma,mu,mu0,nullity0\n";
  char line[128];
  for (size_t i = 0; i < scan.sigma_grid.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.12g,%d,%d,%d\n", scan.sigma_grid[i], scan.mu[i],
                  scan.mu0[i], scan.nullity0[i]);
    out += line;
  }
  return out;
}

}  // namespace msturm
