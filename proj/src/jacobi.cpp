#include "msturm/jacobi.hpp"

#include "msturm/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace msturm {

namespace {

// One RK4 step for u = (V, W), u' = (W, R V + f), with R and f given at the
// step endpoints and midpoint.
void rk4_step(const Matrix& R0, const Matrix& Rh, const Matrix& R1, const Vector& f0,
              const Vector& fh, const Vector& f1, double h, Vector& V, Vector& W) {
  const Vector k1v = W;
  const Vector k1w = R0 * V + f0;
  const Vector k2v = W + 0.5 * h * k1w;
  const Vector k2w = Rh * (V + 0.5 * h * k1v) + fh;
  const Vector k3v = W + 0.5 * h * k2w;
  const Vector k3w = Rh * (V + 0.5 * h * k2v) + fh;
  const Vector k4v = W + h * k3w;
  const Vector k4w = R1 * (V + h * k3v) + f1;
  V += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  W += (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
}

struct StageData {
  std::vector<Matrix> R;   // 2*steps+1 half-grid samples
  std::vector<Vector> f;
};

StageData sample_stages(const MorseSturmProblem& problem, const Forcing& forcing,
                        double sigma, int steps) {
  StageData s;
  const int m = 2 * steps + 1;
  s.R.reserve(m);
  s.f.reserve(m);
  for (int i = 0; i < m; ++i) {
    const double t = sigma * i / (2.0 * steps);
    s.R.push_back(problem.R().eval(t));
    s.f.push_back(forcing ? forcing(t) : Vector::Zero(problem.dim()));
  }
  return s;
}

constexpr double kOdeErrorBudget = 1e-6;

}  // namespace

int FocalReport::total_multiplicity(double below) const {
  int total = 0;
  for (const auto& inst : instants) {
    if (inst.t < below) total += inst.multiplicity;
  }
  return total;
}

FieldSolution integrate_field(const MorseSturmProblem& problem, const Vector& V0,
                              const Vector& V0p, const Forcing& forcing, double sigma) {
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw std::invalid_argument("integrate_field: sigma must lie in (0,1]");
  }
  const int n = problem.dim();
  if (V0.size() != n || V0p.size() != n) {
    throw std::invalid_argument("integrate_field: initial data dimension mismatch");
  }
  const int steps = problem.tol().ode_steps;
  const double h = sigma / steps;
  const StageData stages = sample_stages(problem, forcing, sigma, steps);

  FieldSolution sol;
  sol.sigma = sigma;
  sol.grid.resize(steps + 1);
  sol.values.resize(steps + 1);
  sol.derivs.resize(steps + 1);

  Vector V = V0;
  Vector W = V0p;
  sol.grid[0] = 0.0;
  sol.values[0] = V;
  sol.derivs[0] = W;
  for (int k = 0; k < steps; ++k) {
    rk4_step(stages.R[2 * k], stages.R[2 * k + 1], stages.R[2 * k + 2], stages.f[2 * k],
             stages.f[2 * k + 1], stages.f[2 * k + 2], h, V, W);
    sol.grid[k + 1] = sigma * (k + 1) / steps;
    sol.values[k + 1] = V;
    sol.derivs[k + 1] = W;
  }

  // Half-resolution rerun for the Richardson error estimate; its stage
  // points all lie on the fine half-grid.
  Vector Vc = V0;
  Vector Wc = V0p;
  for (int k = 0; k < steps / 2; ++k) {
    rk4_step(stages.R[4 * k], stages.R[4 * k + 2], stages.R[4 * k + 4], stages.f[4 * k],
             stages.f[4 * k + 2], stages.f[4 * k + 4], 2.0 * h, Vc, Wc);
  }
  const double field_scale = 1.0 + std::max(sol.values[steps].norm(), sol.derivs[steps].norm());
  sol.richardson_error =
      (std::sqrt((V - Vc).squaredNorm() + (W - Wc).squaredNorm())) / 15.0;
  if (sol.richardson_error > kOdeErrorBudget * field_scale) {
    throw NumericsError("integrate_field: step count too small for the requested accuracy");
  }

  const auto& g = problem.g();
  auto constraint = [&](int k) {
    const double t = sol.grid[k];
    return g.inner(sol.derivs[k], problem.Y().eval_vec(t)) -
           g.inner(sol.values[k], problem.Y().deriv_vec(t));
  };
  sol.C_V = constraint(0);
  for (int k = 1; k <= steps; ++k) {
    sol.max_constraint_drift = std::max(sol.max_constraint_drift,
                                        std::abs(constraint(k) - sol.C_V));
  }
  return sol;
}

std::pair<Vector, Vector> eval_solution(const MorseSturmProblem& problem,
                                        const FieldSolution& sol, const Forcing& forcing,
                                        double t) {
  const int steps = static_cast<int>(sol.grid.size()) - 1;
  const double h = sol.sigma / steps;
  int k = std::clamp(static_cast<int>(t / h), 0, steps);
  if (sol.grid[k] > t && k > 0) --k;
  Vector V = sol.values[k];
  Vector W = sol.derivs[k];
  const double dt = t - sol.grid[k];
  if (std::abs(dt) < 1e-15) return {V, W};
  // Two sub-steps keep the local error far below the global one.
  const double hs = dt / 2.0;
  double tk = sol.grid[k];
  for (int s = 0; s < 2; ++s) {
    auto Rat = [&](double tt) { return problem.R().eval(tt); };
    auto fat = [&](double tt) { return forcing ? forcing(tt) : Vector::Zero(problem.dim()); };
    rk4_step(Rat(tk), Rat(tk + hs / 2.0), Rat(tk + hs), fat(tk), fat(tk + hs / 2.0),
             fat(tk + hs), hs, V, W);
    tk += hs;
  }
  return {V, W};
}

std::vector<FieldSolution> p_jacobi_basis(const MorseSturmProblem& problem, double sigma) {
  const int n = problem.dim();
  const Matrix B = problem.P().column_matrix();
  const SubspaceBasis Pperp = g_orthogonal_complement(problem.g(), problem.P());
  const Matrix W = Pperp.column_matrix();

  std::vector<FieldSolution> basis;
  basis.reserve(n);
  for (int i = 0; i < problem.P().dim(); ++i) {
    const Vector V0 = B.col(i);
    const Vector V0p = -B * problem.S_P().col(i);
    basis.push_back(integrate_field(problem, V0, V0p, nullptr, sigma));
  }
  for (int j = 0; j < Pperp.dim(); ++j) {
    basis.push_back(integrate_field(problem, Vector::Zero(n), W.col(j), nullptr, sigma));
  }
  return basis;
}

namespace detail {

namespace {

double smallest_singular_value(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

double relative_gap(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

}  // namespace

FocalReport detect_rank_drops(const MorseSturmProblem& problem,
                              const std::function<Matrix(double)>& columns,
                              const std::function<Matrix(double)>& column_derivs,
                              double t_lo, const std::string& kind) {
  const Tolerances& tol = problem.tol();
  const int steps = tol.ode_steps;
  const bool square = columns(1.0).rows() == columns(1.0).cols();

  // Grid pass: smallest singular value per node, determinant sign when the
  // matrix is square.
  std::vector<double> ts, smin, dets;
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    if (t < t_lo) continue;
    const Matrix M = columns(t);
    ts.push_back(t);
    smin.push_back(smallest_singular_value(M));
    dets.push_back(square ? M.determinant() : 0.0);
  }
  const int m = static_cast<int>(ts.size());

  std::vector<double> candidates;
  // Sign changes of the determinant: plain bisection.
  if (square) {
    for (int i = 0; i + 1 < m; ++i) {
      if (dets[i] == 0.0 || dets[i] * dets[i + 1] >= 0.0) continue;
      double lo = ts[i], hi = ts[i + 1];
      double dlo = dets[i];
      while (hi - lo > tol.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        const double dmid = columns(mid).determinant();
        if (dmid == 0.0) {
          lo = hi = mid;
          break;
        }
        if (dlo * dmid < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          dlo = dmid;
        }
      }
      candidates.push_back(0.5 * (lo + hi));
    }
  }
  // Strict local minima of the smallest singular value: ternary refinement.
  for (int i = 1; i + 1 < m; ++i) {
    if (!(smin[i] < smin[i - 1] && smin[i] < smin[i + 1])) continue;
    double lo = ts[i - 1], hi = ts[i + 1];
    while (hi - lo > tol.bisect_tol) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (smallest_singular_value(columns(m1)) < smallest_singular_value(columns(m2))) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    candidates.push_back(0.5 * (lo + hi));
  }
  // Endpoint: a rank drop exactly at t = 1 needs no refinement.
  if (m > 0 && relative_gap(columns(1.0)) <= tol.rank_tol) candidates.push_back(1.0);

  std::sort(candidates.begin(), candidates.end());
  // Merge refined candidates that landed on the same instant.
  std::vector<double> merged;
  for (double c : candidates) {
    if (!merged.empty() && c - merged.back() <= 2.0 * tol.bisect_tol) {
      merged.back() = 0.5 * (merged.back() + c);
    } else {
      merged.push_back(c);
    }
  }

  FocalReport report;
  report.kind = kind;
  for (double t0 : merged) {
    const Matrix M = columns(t0);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) continue;
    int mult = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) <= tol.rank_tol * sv(0)) ++mult;
    }
    if (mult == 0) continue;  // refined candidate did not reach singularity

    FocalInstant inst;
    inst.t = t0;
    inst.multiplicity = mult;
    inst.residual = sv(sv.size() - 1) / sv(0);
    // g restricted to the span of derivatives of solutions vanishing at t0.
    const Matrix coeff_kernel = svd.matrixV().rightCols(mult);
    const Matrix deriv_span = column_derivs(t0) * coeff_kernel;
    inst.nondegenerate =
        is_nondegenerate(problem.g(), SubspaceBasis::from_columns(deriv_span, tol.rank_tol),
                         tol.rank_tol);
    report.instants.push_back(inst);
  }
  return report;
}

}  // namespace detail

FocalReport focal_instants(const MorseSturmProblem& problem, double t_lo) {
  if (!(t_lo > 0.0)) throw std::invalid_argument("focal_instants: t_lo must be positive");
  require_valid_regime(problem);
  const std::vector<FieldSolution> basis = p_jacobi_basis(problem, 1.0);
  const int n = problem.dim();
  const int steps = problem.tol().ode_steps;

  auto matrix_at = [&, basis](double t) {
    Matrix M(n, static_cast<int>(basis.size()));
    const int k = static_cast<int>(std::lround(t * steps));
    const bool on_node = std::abs(t - static_cast<double>(k) / steps) < 1e-15;
    for (int j = 0; j < M.cols(); ++j) {
      M.col(j) = on_node ? basis[j].values[k]
                         : eval_solution(problem, basis[j], nullptr, t).first;
    }
    return M;
  };
  auto deriv_at = [&, basis](double t) {
    Matrix D(n, static_cast<int>(basis.size()));
    for (int j = 0; j < D.cols(); ++j) {
      D.col(j) = eval_solution(problem, basis[j], nullptr, t).second;
    }
    return D;
  };
  return detail::detect_rank_drops(problem, matrix_at, deriv_at, t_lo, "focal");
}

JacobiValueSpaces jacobi_value_spaces(const MorseSturmProblem& problem, double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::invalid_argument("jacobi_value_spaces: t must lie in (0,1]");
  }
  const std::vector<FieldSolution> basis = p_jacobi_basis(problem, 1.0);
  const int n = problem.dim();
  Matrix M(n, n);
  Eigen::RowVectorXd c_row(n);
  for (int j = 0; j < n; ++j) {
    M.col(j) = eval_solution(problem, basis[j], nullptr, t).first;
    c_row(j) = basis[j].C_V;
  }
  const double rank_tol = problem.tol().rank_tol;
  JacobiValueSpaces out{
      SubspaceBasis::from_columns(column_space_basis(M * kernel_basis(c_row, rank_tol), rank_tol),
                                  rank_tol),
      SubspaceBasis::from_columns(column_space_basis(M, rank_tol), rank_tol)};
  return out;
}

}  // namespace msturm
