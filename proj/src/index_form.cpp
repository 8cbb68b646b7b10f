#include "msturm/index_form.hpp"

#include "msturm/errors.hpp"
#include "msturm/jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>

namespace msturm {

namespace {

// 3-point Gauss rule on [0,1]; exact through degree 5.
struct GaussRule {
  std::array<double, 3> xi;
  std::array<double, 3> w;
};
const GaussRule kGauss{{0.5 - std::sqrt(3.0 / 5.0) / 2.0, 0.5, 0.5 + std::sqrt(3.0 / 5.0) / 2.0},
                       {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};

// Dimension of the eigenvalue-zero window: eigenvalues of the reduced pencil
// scale O(1), the kernel mode at a degenerate sigma converges like h^2.
constexpr double kNullityMeshFactor = 10.0;

struct NodeMap {
  // Returns (offset, transfer) for a node: nodal values are transfer * dof
  // slice. Interior transfers are identity and handled without multiplies.
  const DiscreteSpace& space;
  int offset(int node) const {
    if (node == 0) return 0;
    return static_cast<int>(space.P_basis.cols()) + (node - 1) * space.n;
  }
  int width(int node) const {
    if (node == 0) return static_cast<int>(space.P_basis.cols());
    if (node == space.mesh_size) return static_cast<int>(space.Q_basis.cols());
    return space.n;
  }
  bool boundary(int node) const { return node == 0 || node == space.mesh_size; }
  const Matrix& transfer(int node) const {
    return node == 0 ? space.P_basis : space.Q_basis;
  }
};

// A += contribution of the n x n block K coupling nodes a and b.
void add_block(Matrix& A, const NodeMap& map, int a, int b, const Matrix& K) {
  const int wa = map.width(a);
  const int wb = map.width(b);
  if (wa == 0 || wb == 0) return;
  if (!map.boundary(a) && !map.boundary(b)) {
    A.block(map.offset(a), map.offset(b), wa, wb) += K;
  } else if (map.boundary(a) && !map.boundary(b)) {
    A.block(map.offset(a), map.offset(b), wa, wb) += map.transfer(a).transpose() * K;
  } else if (!map.boundary(a) && map.boundary(b)) {
    A.block(map.offset(a), map.offset(b), wa, wb) += K * map.transfer(b);
  } else {
    A.block(map.offset(a), map.offset(b), wa, wb) +=
        map.transfer(a).transpose() * K * map.transfer(b);
  }
}

Matrix symmetrized(const Matrix& A) { return 0.5 * (A + A.transpose()); }

// Shared assembly of int g(V',W') + c_R * g(R(sigma t)V, W) dt over the
// cells, into the dof-space matrix.
Matrix assemble_core(const MorseSturmProblem& problem, const DiscreteSpace& space,
                     double sigma, double c_R) {
  const int N = space.mesh_size;
  const int n = space.n;
  const double h = 1.0 / N;
  const Matrix& G = problem.g().entries();
  const NodeMap map{space};
  Matrix A = Matrix::Zero(space.dof_count, space.dof_count);

  const Matrix stiff = G / h;
  for (int i = 0; i < N; ++i) {
    Matrix K00 = stiff, K11 = stiff, K01 = -stiff;
    if (c_R != 0.0) {
      for (int q = 0; q < 3; ++q) {
        const double xi = kGauss.xi[q];
        const double wq = kGauss.w[q] * h * c_R;
        const double t = (i + xi) * h;
        const Matrix K = symmetrized(G * problem.R().eval(sigma * t));
        K00 += wq * (1.0 - xi) * (1.0 - xi) * K;
        K11 += wq * xi * xi * K;
        K01 += wq * (1.0 - xi) * xi * K;
      }
    }
    add_block(A, map, i, i, K00);
    add_block(A, map, i + 1, i + 1, K11);
    add_block(A, map, i, i + 1, K01);
    add_block(A, map, i + 1, i, K01.transpose());
  }
  (void)n;
  return A;
}

void add_endpoint_term(Matrix& A, const DiscreteSpace& space, const Matrix& G,
                       const Matrix& basis, const Matrix& shape, double factor, int node) {
  if (basis.cols() == 0) return;
  const Matrix gram = basis.transpose() * G * basis;
  const NodeMap map{space};
  A.block(map.offset(node), map.offset(node), basis.cols(), basis.cols()) +=
      factor * symmetrized(gram * shape);
}

// Euclidean H^1 Gram matrix on the discrete space; normalizes the reduced
// eigenproblem so the spectrum has O(1) scale.
Matrix assemble_h1_gram(const DiscreteSpace& space) {
  const int N = space.mesh_size;
  const int n = space.n;
  const double h = 1.0 / N;
  const NodeMap map{space};
  Matrix H = Matrix::Zero(space.dof_count, space.dof_count);
  const Matrix I = Matrix::Identity(n, n);
  const Matrix d00 = (1.0 / h + h / 3.0) * I;
  const Matrix d01 = (-1.0 / h + h / 6.0) * I;
  for (int i = 0; i < N; ++i) {
    add_block(H, map, i, i, d00);
    add_block(H, map, i + 1, i + 1, d00);
    add_block(H, map, i, i + 1, d01);
    add_block(H, map, i + 1, i, d01);
  }
  return H;
}

Matrix constraint_matrix(const MorseSturmProblem& problem, const DiscreteSpace& space,
                         double sigma, SpaceKind kind) {
  const int N = space.mesh_size;
  const int n = space.n;
  const double h = 1.0 / N;
  const Matrix& G = problem.g().entries();
  const NodeMap map{space};
  const int cols = space.dof_count + (kind == SpaceKind::hstar ? 1 : 0);
  Matrix C = Matrix::Zero(N, cols);

  for (int i = 0; i < N; ++i) {
    Vector left = Vector::Zero(n);
    Vector right = Vector::Zero(n);
    if (kind == SpaceKind::h0 && sigma == 0.0) {
      // Limiting constraint: cell average of g(V, Y(0)).
      const Vector gy0 = G * problem.Y().eval_vec(0.0);
      left = 0.5 * gy0;
      right = 0.5 * gy0;
    } else {
      for (int q = 0; q < 3; ++q) {
        const double xi = kGauss.xi[q];
        const double wq = kGauss.w[q];
        const double t = (i + xi) * h;
        const Vector gy = G * problem.Y().eval_vec(sigma * t);
        const Vector gyp = G * problem.Y().deriv_vec(sigma * t);
        left += wq * (-gy / h - sigma * (1.0 - xi) * gyp);
        right += wq * (gy / h - sigma * xi * gyp);
      }
    }
    auto scatter = [&](int node, const Vector& coeff) {
      const int w = map.width(node);
      if (w == 0) return;
      if (map.boundary(node)) {
        C.block(i, map.offset(node), 1, w) += coeff.transpose() * map.transfer(node);
      } else {
        C.block(i, map.offset(node), 1, w) += coeff.transpose();
      }
    };
    scatter(i, left);
    scatter(i + 1, right);
    if (kind == SpaceKind::hstar) C(i, space.dof_count) = -1.0;
  }
  return C;
}

struct ReducedEig {
  Vector eigenvalues;
};

ReducedEig reduced_spectrum(const Matrix& A, const Matrix& H, const Matrix& Z) {
  const Matrix Ar = symmetrized(Z.transpose() * A * Z);
  const Matrix Hr = symmetrized(Z.transpose() * H * Z);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(Ar, Hr,
                                                       Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    throw NumericsError("index_and_nullity: generalized eigensolve failed");
  }
  return ReducedEig{ges.eigenvalues()};
}

IndexResult count_spectrum(const Vector& ev, double sigma, int N, double kernel_tol) {
  const double h = 1.0 / N;
  const double tau = std::max(kernel_tol, kNullityMeshFactor * h * h);
  IndexResult out;
  out.mesh_size = N;
  out.sigma = sigma;
  out.smallest_abs_eigenvalue = ev.size() ? ev.cwiseAbs().minCoeff() : 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tau) {
      ++out.n_minus;
    } else if (ev(i) <= tau) {
      ++out.nullity;
    }
  }
  return out;
}

}  // namespace

DiscreteSpace discrete_space(const MorseSturmProblem& problem, int N, bool two_endpoint) {
  if (N < 8) throw std::invalid_argument("discrete_space: mesh size must be >= 8");
  DiscreteSpace space;
  space.mesh_size = N;
  space.n = problem.dim();
  space.P_basis = problem.P().column_matrix();
  space.Q_basis = (two_endpoint && problem.has_Q()) ? problem.Q().column_matrix()
                                                    : Matrix(problem.dim(), 0);
  space.dof_count = static_cast<int>(space.P_basis.cols()) + space.n * (N - 1) +
                    static_cast<int>(space.Q_basis.cols());
  return space;
}

Matrix assemble_reparametrized_form(const MorseSturmProblem& problem, double sigma, int N) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw std::invalid_argument("assemble_reparametrized_form: sigma must lie in [0,1]");
  }
  const DiscreteSpace space = discrete_space(problem, N, false);
  Matrix A = assemble_core(problem, space, sigma, sigma * sigma);
  add_endpoint_term(A, space, problem.g().entries(), space.P_basis, problem.S_P(), -sigma, 0);
  return A;
}

Matrix assemble_two_endpoint_form(const MorseSturmProblem& problem, int N) {
  const DiscreteSpace space = discrete_space(problem, N, true);
  Matrix A = assemble_core(problem, space, 1.0, 1.0);
  add_endpoint_term(A, space, problem.g().entries(), space.P_basis, problem.S_P(), -1.0, 0);
  if (space.Q_basis.cols() > 0) {
    add_endpoint_term(A, space, problem.g().entries(), space.Q_basis, problem.S_Q(), 1.0,
                      space.mesh_size);
  }
  return A;
}

ConstrainedSubspace constraint_kernel(const MorseSturmProblem& problem, double sigma, int N,
                                      SpaceKind kind, bool two_endpoint) {
  const DiscreteSpace space = discrete_space(problem, N, two_endpoint);
  const Matrix C = constraint_matrix(problem, space, sigma, kind);
  const double rank_tol = problem.tol().rank_tol;
  Matrix kernel = kernel_basis(C, rank_tol);
  if (kernel.cols() == 0) {
    throw NumericsError("constraint_kernel: empty kernel at sigma=" + std::to_string(sigma));
  }
  if (kind == SpaceKind::hstar) {
    // Drop the shared-constant coordinate and re-orthonormalize the fields.
    const Matrix fields = kernel.topRows(space.dof_count);
    Eigen::BDCSVD<Matrix> svd(fields, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rank_tol * sv(0)) ++rank;
    }
    if (rank != kernel.cols()) {
      throw NumericsError("constraint_kernel: affine kernel lost rank when projected");
    }
    kernel = svd.matrixU().leftCols(rank);
  }
  ConstrainedSubspace out;
  out.space = space;
  out.sigma = sigma;
  out.kind = kind;
  out.kernel = std::move(kernel);
  return out;
}

IndexResult index_and_nullity(const MorseSturmProblem& problem, double sigma, int N,
                              SpaceKind kind) {
  require_valid_regime(problem);
  const Matrix A = assemble_reparametrized_form(problem, sigma, N);
  const ConstrainedSubspace sub = constraint_kernel(problem, sigma, N, kind);
  const Matrix H = assemble_h1_gram(sub.space);
  return count_spectrum(reduced_spectrum(A, H, sub.kernel).eigenvalues, sigma, N,
                        problem.tol().kernel_tol);
}

std::pair<IndexResult, IndexResult> index_pair_h0_hstar(const MorseSturmProblem& problem,
                                                        double sigma, int N) {
  const Matrix A = assemble_reparametrized_form(problem, sigma, N);
  const ConstrainedSubspace sub0 = constraint_kernel(problem, sigma, N, SpaceKind::h0);
  const ConstrainedSubspace subs = constraint_kernel(problem, sigma, N, SpaceKind::hstar);
  const Matrix H = assemble_h1_gram(sub0.space);
  const double kernel_tol = problem.tol().kernel_tol;
  return {count_spectrum(reduced_spectrum(A, H, sub0.kernel).eigenvalues, sigma, N, kernel_tol),
          count_spectrum(reduced_spectrum(A, H, subs.kernel).eigenvalues, sigma, N, kernel_tol)};
}

int epsilon_invariant(const MorseSturmProblem& problem, int N) {
  require_valid_regime(problem);
  const auto [h0, hstar] = index_pair_h0_hstar(problem, 1.0, N);
  const int eps = hstar.n_minus - h0.n_minus;
  if (eps < 0 || eps > 1) {
    throw NumericsError("epsilon_invariant: computed difference " + std::to_string(eps) +
                        " outside {0,1}; discretization failure");
  }
  return eps;
}

namespace {

struct EndpointFormData {
  Matrix F;
  double scale = 0.0;
  int dim = 0;
};

EndpointFormData endpoint_form(const MorseSturmProblem& problem, bool restrict_to_C0) {
  const std::vector<FieldSolution> basis = p_jacobi_basis(problem, 1.0);
  const int n = problem.dim();
  const double rank_tol = problem.tol().rank_tol;
  const Matrix QB = problem.has_Q() ? problem.Q().column_matrix() : Matrix(n, 0);

  Matrix M1(n, n), D1(n, n);
  Eigen::RowVectorXd c_row(n);
  for (int j = 0; j < n; ++j) {
    M1.col(j) = basis[j].values.back();
    D1.col(j) = basis[j].derivs.back();
    c_row(j) = basis[j].C_V;
  }

  // Conditions on coefficients: J(1) in Q, and C_J = 0 when requested.
  const Matrix proj_Q = QB.cols() > 0
                            ? Matrix(Matrix::Identity(n, n) -
                                     SubspaceBasis::from_columns(QB).projection())
                            : Matrix(Matrix::Identity(n, n));
  Matrix conditions(n + (restrict_to_C0 ? 1 : 0), n);
  conditions.topRows(n) = proj_Q * M1;
  if (restrict_to_C0) conditions.bottomRows(1) = c_row;
  const Matrix coeffs = kernel_basis(conditions, rank_tol);

  EndpointFormData out;
  out.dim = static_cast<int>(coeffs.cols());
  if (out.dim == 0) {
    out.F = Matrix::Zero(0, 0);
    return out;
  }

  const Matrix vals = M1 * coeffs;
  const Matrix ders = D1 * coeffs;
  Matrix SQ_vals = Matrix::Zero(n, out.dim);
  if (QB.cols() > 0) {
    // Coordinates of J(1) in Q's basis, then the shape operator.
    const Matrix q_coords = QB.colPivHouseholderQr().solve(vals);
    SQ_vals = QB * (problem.S_Q() * q_coords);
  }
  const Matrix& G = problem.g().entries();
  out.F = symmetrized(vals.transpose() * G.transpose() * (SQ_vals + ders));

  // Scale of the ingredients over the whole trajectory, so an identically
  // vanishing form is classified as zero and not by the sign of noise.
  double max_val = 0.0;
  double max_der = 0.0;
  const int steps = static_cast<int>(basis[0].values.size()) - 1;
  for (int k = 0; k <= steps; ++k) {
    Matrix Vk(n, out.dim), Dk(n, out.dim);
    Matrix stacked_vals(n, n), stacked_ders(n, n);
    for (int j = 0; j < n; ++j) {
      stacked_vals.col(j) = basis[j].values[k];
      stacked_ders.col(j) = basis[j].derivs[k];
    }
    max_val = std::max(max_val, (stacked_vals * coeffs).norm());
    max_der = std::max(max_der, (stacked_ders * coeffs).norm());
  }
  const double shape_norm = QB.cols() > 0 ? problem.S_Q().norm() : 0.0;
  out.scale = G.norm() * max_val * (max_der + shape_norm * max_val);
  return out;
}

}  // namespace

Inertia endpoint_form_inertia(const MorseSturmProblem& problem, bool restrict_to_C0) {
  const EndpointFormData data = endpoint_form(problem, restrict_to_C0);
  if (data.dim == 0) return Inertia{};
  return inertia(data.F, problem.tol().rank_tol, data.scale);
}

TwoEndpointResult two_endpoint_index(const MorseSturmProblem& problem, int N) {
  require_valid_regime(problem);
  TwoEndpointResult out;

  const JacobiValueSpaces spaces = jacobi_value_spaces(problem, 1.0);
  out.decomposition_valid =
      !problem.has_Q() || spaces.J_span.contains_subspace(problem.Q(), 1e-6);

  const Matrix A = assemble_two_endpoint_form(problem, N);
  const ConstrainedSubspace sub = constraint_kernel(problem, 1.0, N, SpaceKind::h0, true);
  const Matrix H = assemble_h1_gram(sub.space);
  out.total = count_spectrum(reduced_spectrum(A, H, sub.kernel).eigenvalues, 1.0, N,
                             problem.tol().kernel_tol);

  const EndpointFormData data = endpoint_form(problem, true);
  out.jq_dim = data.dim;
  out.correction = data.dim == 0 ? Inertia{}
                                 : inertia(data.F, problem.tol().rank_tol, data.scale);
  return out;
}

}  // namespace msturm
