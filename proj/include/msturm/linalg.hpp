#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace msturm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Signature of a symmetric bilinear form: eigenvalue counts (negative,
/// numerically zero, positive).
struct Inertia {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;

  bool operator==(const Inertia&) const = default;
};

/// Nondegenerate symmetric bilinear form on R^n with exactly one negative
/// eigenvalue. Construction rejects anything else.
class MetricForm {
 public:
  explicit MetricForm(const Matrix& entries, double kernel_tol = 1e-9);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

  double inner(const Vector& u, const Vector& v) const;

 private:
  Matrix entries_;
};

/// A linear subspace of R^n given by a list of independent spanning vectors.
/// An empty list is the zero subspace.
class SubspaceBasis {
 public:
  SubspaceBasis(int ambient_dim, std::vector<Vector> vectors,
                double rank_tol = 1e-8);

  static SubspaceBasis zero(int ambient_dim) { return SubspaceBasis(ambient_dim, {}); }
  static SubspaceBasis from_columns(const Matrix& cols, double rank_tol = 1e-8);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(vectors_.size()); }
  bool is_zero() const { return vectors_.empty(); }
  const std::vector<Vector>& vectors() const { return vectors_; }

  /// n x dim matrix whose columns span the subspace (n x 0 when zero).
  Matrix column_matrix() const;
  /// Euclidean orthogonal projection onto the subspace.
  Matrix projection() const;
  /// True if v lies in the subspace up to tol * |v|.
  bool contains(const Vector& v, double tol = 1e-8) const;
  /// True if other's span lies inside this span up to tol.
  bool contains_subspace(const SubspaceBasis& other, double tol = 1e-8) const;
  /// Span equality via projection distance |P_A - P_B| < tol.
  bool spans_same(const SubspaceBasis& other, double tol = 1e-8) const;

 private:
  int ambient_dim_;
  std::vector<Vector> vectors_;
};

/// uT * g * v, the indefinite inner product.
double g_inner(const MetricForm& g, const Vector& u, const Vector& v);

/// Basis of {v : g(v,p) = 0 for all p in P}. Always has dimension
/// n - dim P since g is nondegenerate; degenerate P is allowed.
SubspaceBasis g_orthogonal_complement(const MetricForm& g, const SubspaceBasis& P);

/// True iff the Gram matrix of g on P has smallest singular value
/// > tol * largest. The zero subspace is nondegenerate.
bool is_nondegenerate(const MetricForm& g, const SubspaceBasis& P, double tol = 1e-8);

/// Eigenvalue sign counts of a symmetric matrix. Eigenvalues with
/// |lambda| <= kernel_tol * max(|lambda|_max, scale_floor) count as zero;
/// scale_floor guards the decision when the whole matrix is near zero.
Inertia inertia(const Matrix& symmetric_matrix, double kernel_tol = 1e-9,
                double scale_floor = 0.0);

/// Orthonormal basis (columns) of the kernel of A, with relative singular
/// value threshold rank_tol.
Matrix kernel_basis(const Matrix& A, double rank_tol = 1e-8);

/// Numerical rank with relative singular value threshold rank_tol.
int numerical_rank(const Matrix& A, double rank_tol = 1e-8);

/// Orthonormal basis (columns) of the column space of A.
Matrix column_space_basis(const Matrix& A, double rank_tol = 1e-8);

}  // namespace msturm
