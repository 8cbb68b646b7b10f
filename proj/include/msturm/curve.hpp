#pragma once

#include "msturm/linalg.hpp"

#include <vector>

namespace msturm {

enum class CurveKind { constant, polynomial, sampled };

/// Matrix- or vector-valued function of t on [0,1]. Three representations:
/// a constant, a polynomial in t (coefficients in ascending degree), or
/// samples on a uniform grid interpolated by a not-a-knot cubic spline.
/// Immutable after construction.
class CurveSpec {
 public:
  static CurveSpec constant(Matrix value);
  static CurveSpec polynomial(std::vector<Matrix> coefficients);
  static CurveSpec sampled(std::vector<Matrix> samples);

  CurveKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// Underlying payload: the constant, the coefficients, or the samples.
  const std::vector<Matrix>& payload() const { return data_; }

  Matrix eval(double t) const;
  Matrix deriv(double t) const;
  Matrix second_deriv(double t) const;

  /// Convenience accessors for vector-valued curves (cols() == 1).
  Vector eval_vec(double t) const { return eval(t).col(0); }
  Vector deriv_vec(double t) const { return deriv(t).col(0); }
  Vector second_deriv_vec(double t) const { return second_deriv(t).col(0); }

  /// max over a uniform grid of the Frobenius norm of eval(t).
  double max_norm(int grid_nodes = 257) const;

 private:
  CurveSpec(CurveKind kind, std::vector<Matrix> data);
  void build_spline();
  double clamp_time(double t) const;

  CurveKind kind_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Matrix> data_;
  std::vector<Matrix> spline_d2_;  // spline second derivatives at the nodes
};

}  // namespace msturm
