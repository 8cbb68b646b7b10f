#include "msturm/pseudo.hpp"

#include "msturm/errors.hpp"

#include <cmath>

namespace msturm {

namespace {

// Initial data of the constrained solution space. Parameters are
// (x, v[, lambda]): V(0) = B x, V'(0) = -B S_P x - lambda Y0/g(Y0,Y0) + W v,
// subject to the single linear condition g(V'(0),Y0) - g(V(0),Y0') = 0.
struct InitialData {
  Matrix kernel;  // parameter-space basis, one column per basis field
  Matrix B;       // P basis
  Matrix W;       // P-orthogonal complement basis
  bool with_lambda = false;
};

InitialData constrained_initial_data(const MorseSturmProblem& problem, bool with_lambda) {
  const auto& g = problem.g();
  const Matrix B = problem.P().column_matrix();
  const Matrix W = g_orthogonal_complement(g, problem.P()).column_matrix();
  const int p = static_cast<int>(B.cols());
  const int w = static_cast<int>(W.cols());
  const int params = p + w + (with_lambda ? 1 : 0);

  const Vector y0 = problem.Y().eval_vec(0.0);
  const Vector y0p = problem.Y().deriv_vec(0.0);
  const Vector gy0 = g.entries() * y0;
  const Vector gy0p = g.entries() * y0p;

  Eigen::RowVectorXd row(params);
  // g(V'(0), Y0) - g(V(0), Y0') as a function of the parameters.
  row.head(p) = (-(B * problem.S_P()).transpose() * gy0 - B.transpose() * gy0p).transpose();
  row.segment(p, w) = (W.transpose() * gy0).transpose();
  if (with_lambda) row(params - 1) = -1.0;  // -lambda g(Y0,Y0)/g(Y0,Y0)

  InitialData out;
  out.B = B;
  out.W = W;
  out.with_lambda = with_lambda;
  out.kernel = kernel_basis(row, problem.tol().rank_tol);
  return out;
}

std::vector<PseudoField> basis_from_data(const MorseSturmProblem& problem,
                                         const InitialData& data, double sigma) {
  const auto& g = problem.g();
  const int n = problem.dim();
  const int p = static_cast<int>(data.B.cols());
  const int w = static_cast<int>(data.W.cols());
  const Vector y0 = problem.Y().eval_vec(0.0);
  const double gyy0 = g.inner(y0, y0);

  std::vector<PseudoField> basis;
  basis.reserve(data.kernel.cols());
  for (int j = 0; j < data.kernel.cols(); ++j) {
    const Vector c = data.kernel.col(j);
    const Vector x = c.head(p);
    const Vector v = c.segment(p, w);
    const double lambda = data.with_lambda ? c(p + w) : 0.0;
    const Vector V0 = p > 0 ? Vector(data.B * x) : Vector(Vector::Zero(n));
    Vector V0p = Vector::Zero(n);
    if (p > 0) V0p -= data.B * (problem.S_P() * x);
    if (w > 0) V0p += data.W * v;
    if (data.with_lambda) V0p -= (lambda / gyy0) * y0;

    Forcing forcing = nullptr;
    if (lambda != 0.0) {
      forcing = [&problem, lambda](double t) { return Vector(lambda * m_of_Y(problem, t)); };
    }
    PseudoField field;
    field.lambda = lambda;
    field.solution = integrate_field(problem, V0, V0p, forcing, sigma);
    basis.push_back(std::move(field));
  }
  return basis;
}

}  // namespace

std::vector<PseudoField> pseudo_basis(const MorseSturmProblem& problem, double sigma) {
  const ValidationReport report = require_valid_regime(problem);
  const bool with_lambda = report.regime != Regime::singular;
  const InitialData data = constrained_initial_data(problem, with_lambda);
  return basis_from_data(problem, data, sigma);
}

FocalReport pseudo_focal_instants(const MorseSturmProblem& problem, double t_lo) {
  if (!(t_lo > 0.0)) {
    throw std::invalid_argument("pseudo_focal_instants: t_lo must be positive");
  }
  const std::vector<PseudoField> basis = pseudo_basis(problem, 1.0);
  const int n = problem.dim();
  const int cols = static_cast<int>(basis.size());
  const int steps = problem.tol().ode_steps;

  auto forcing_of = [&problem](const PseudoField& f) -> Forcing {
    if (f.lambda == 0.0) return nullptr;
    const double lambda = f.lambda;
    return [&problem, lambda](double t) { return Vector(lambda * m_of_Y(problem, t)); };
  };

  auto matrix_at = [&, basis](double t) {
    Matrix M(n, cols);
    const int k = static_cast<int>(std::lround(t * steps));
    const bool on_node = std::abs(t - static_cast<double>(k) / steps) < 1e-15;
    for (int j = 0; j < cols; ++j) {
      M.col(j) = on_node
                     ? basis[j].solution.values[k]
                     : eval_solution(problem, basis[j].solution, forcing_of(basis[j]), t).first;
    }
    return M;
  };
  auto deriv_at = [&, basis](double t) {
    Matrix D(n, cols);
    for (int j = 0; j < cols; ++j) {
      D.col(j) = eval_solution(problem, basis[j].solution, forcing_of(basis[j]), t).second;
    }
    return D;
  };
  return detail::detect_rank_drops(problem, matrix_at, deriv_at, t_lo, "pseudo_focal");
}

}  // namespace msturm
