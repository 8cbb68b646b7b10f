#include "msturm/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace msturm {

MetricForm::MetricForm(const Matrix& entries, double kernel_tol) {
  if (entries.rows() != entries.cols() || entries.rows() < 2) {
    throw std::invalid_argument("MetricForm: need a square matrix of dimension >= 2");
  }
  const double scale = entries.cwiseAbs().maxCoeff();
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    throw std::invalid_argument("MetricForm: matrix is not symmetric");
  }
  entries_ = 0.5 * (entries + entries.transpose());

  const Inertia sig = inertia(entries_, kernel_tol);
  if (sig.n_minus != 1 || sig.n_zero != 0) {
    throw std::invalid_argument(
        "MetricForm: inertia must be (1 negative, 0 zero, n-1 positive), got (" +
        std::to_string(sig.n_minus) + "," + std::to_string(sig.n_zero) + "," +
        std::to_string(sig.n_plus) + ")");
  }
}

double MetricForm::inner(const Vector& u, const Vector& v) const {
  if (u.size() != dim() || v.size() != dim()) {
    throw std::invalid_argument("MetricForm::inner: dimension mismatch");
  }
  return u.dot(entries_ * v);
}

SubspaceBasis::SubspaceBasis(int ambient_dim, std::vector<Vector> vectors, double rank_tol)
    : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {
  if (ambient_dim_ < 1) throw std::invalid_argument("SubspaceBasis: ambient_dim < 1");
  for (const Vector& v : vectors_) {
    if (v.size() != ambient_dim_) {
      throw std::invalid_argument("SubspaceBasis: vector dimension mismatch");
    }
  }
  if (!vectors_.empty()) {
    if (static_cast<int>(vectors_.size()) > ambient_dim_ ||
        numerical_rank(column_matrix(), rank_tol) != static_cast<int>(vectors_.size())) {
      throw std::invalid_argument("SubspaceBasis: vectors are not linearly independent");
    }
  }
}

SubspaceBasis SubspaceBasis::from_columns(const Matrix& cols, double rank_tol) {
  std::vector<Vector> vecs;
  vecs.reserve(cols.cols());
  for (int j = 0; j < cols.cols(); ++j) vecs.push_back(cols.col(j));
  return SubspaceBasis(static_cast<int>(cols.rows()), std::move(vecs), rank_tol);
}

Matrix SubspaceBasis::column_matrix() const {
  Matrix B(ambient_dim_, static_cast<int>(vectors_.size()));
  for (int j = 0; j < B.cols(); ++j) B.col(j) = vectors_[j];
  return B;
}

Matrix SubspaceBasis::projection() const {
  if (is_zero()) return Matrix::Zero(ambient_dim_, ambient_dim_);
  const Matrix B = column_matrix();
  Eigen::HouseholderQR<Matrix> qr(B);
  const Matrix Q = qr.householderQ() * Matrix::Identity(ambient_dim_, dim());
  return Q * Q.transpose();
}

bool SubspaceBasis::contains(const Vector& v, double tol) const {
  const double nv = v.norm();
  if (nv == 0.0) return true;
  return ((projection() * v) - v).norm() <= tol * nv;
}

bool SubspaceBasis::contains_subspace(const SubspaceBasis& other, double tol) const {
  for (const Vector& v : other.vectors()) {
    if (!contains(v, tol)) return false;
  }
  return true;
}

bool SubspaceBasis::spans_same(const SubspaceBasis& other, double tol) const {
  if (ambient_dim_ != other.ambient_dim_) return false;
  return (projection() - other.projection()).norm() < tol;
}

double g_inner(const MetricForm& g, const Vector& u, const Vector& v) {
  return g.inner(u, v);
}

SubspaceBasis g_orthogonal_complement(const MetricForm& g, const SubspaceBasis& P) {
  const int n = g.dim();
  if (P.ambient_dim() != n) {
    throw std::invalid_argument("g_orthogonal_complement: ambient dimension mismatch");
  }
  if (P.is_zero()) {
    // Complement of {0} is the whole space; keep the canonical basis.
    std::vector<Vector> vecs;
    for (int i = 0; i < n; ++i) vecs.push_back(Vector::Unit(n, i));
    return SubspaceBasis(n, std::move(vecs));
  }
  // v is orthogonal to P iff (B^T g) v = 0.
  const Matrix constraint = P.column_matrix().transpose() * g.entries();
  return SubspaceBasis::from_columns(kernel_basis(constraint));
}

bool is_nondegenerate(const MetricForm& g, const SubspaceBasis& P, double tol) {
  if (P.is_zero()) return true;
  const Matrix B = P.column_matrix();
  const Matrix gram = B.transpose() * g.entries() * B;
  Eigen::JacobiSVD<Matrix> svd(gram);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > tol * sv(0);
}

Inertia inertia(const Matrix& symmetric_matrix, double kernel_tol, double scale_floor) {
  const auto n = symmetric_matrix.rows();
  if (n != symmetric_matrix.cols()) {
    throw std::invalid_argument("inertia: matrix must be square");
  }
  if (n == 0) return Inertia{};
  const double scale = symmetric_matrix.cwiseAbs().maxCoeff();
  if ((symmetric_matrix - symmetric_matrix.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(scale, 1.0)) {
    throw std::invalid_argument("inertia: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (symmetric_matrix + symmetric_matrix.transpose()),
      Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues();
  const double max_abs = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
  const double thresh = kernel_tol * std::max(max_abs, scale_floor);
  Inertia out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(ev(i)) <= thresh) {
      ++out.n_zero;
    } else if (ev(i) < 0.0) {
      ++out.n_minus;
    } else {
      ++out.n_plus;
    }
  }
  return out;
}

Matrix kernel_basis(const Matrix& A, double rank_tol) {
  const int k = static_cast<int>(A.cols());
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rank_tol * sv(0)) ++rank;
    }
  }
  return svd.matrixV().rightCols(k - rank);
}

int numerical_rank(const Matrix& A, double rank_tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * sv(0)) ++rank;
  }
  return rank;
}

Matrix column_space_basis(const Matrix& A, double rank_tol) {
  if (A.cols() == 0) return Matrix(A.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rank_tol * sv(0)) ++rank;
    }
  }
  return svd.matrixU().leftCols(rank);
}

}  // namespace msturm
