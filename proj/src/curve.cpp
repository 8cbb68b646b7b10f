#include "msturm/curve.hpp"

#include "msturm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace msturm {

namespace {
constexpr int kMinSampleNodes = 33;
constexpr double kTimeSlack = 1e-9;
}  // namespace

CurveSpec::CurveSpec(CurveKind kind, std::vector<Matrix> data)
    : kind_(kind), data_(std::move(data)) {
  if (data_.empty()) throw SchemaError("CurveSpec: empty payload");
  rows_ = static_cast<int>(data_[0].rows());
  cols_ = static_cast<int>(data_[0].cols());
  for (const Matrix& m : data_) {
    if (m.rows() != rows_ || m.cols() != cols_) {
      throw SchemaError("CurveSpec: inconsistent payload shapes");
    }
  }
}

CurveSpec CurveSpec::constant(Matrix value) {
  std::vector<Matrix> data;
  data.push_back(std::move(value));
  return CurveSpec(CurveKind::constant, std::move(data));
}

CurveSpec CurveSpec::polynomial(std::vector<Matrix> coefficients) {
  return CurveSpec(CurveKind::polynomial, std::move(coefficients));
}

CurveSpec CurveSpec::sampled(std::vector<Matrix> samples) {
  if (static_cast<int>(samples.size()) < kMinSampleNodes) {
    throw SchemaError("CurveSpec: sampled grid needs at least 33 nodes");
  }
  CurveSpec c(CurveKind::sampled, std::move(samples));
  c.build_spline();
  return c;
}

double CurveSpec::clamp_time(double t) const {
  if (t < -kTimeSlack || t > 1.0 + kTimeSlack) {
    throw std::invalid_argument("CurveSpec: t outside [0,1]");
  }
  return std::clamp(t, 0.0, 1.0);
}

// Not-a-knot cubic spline on the uniform grid t_j = j*h. The two end
// conditions (continuous third derivative at the first and last interior
// node) decouple: the second derivative at node 1 and node M-2 equals the
// plain second difference there, and the remaining interior unknowns form
// a constant-coefficient tridiagonal system.
void CurveSpec::build_spline() {
  const int M = static_cast<int>(data_.size());
  const double h = 1.0 / (M - 1);
  spline_d2_.assign(M, Matrix::Zero(rows_, cols_));

  auto d2diff = [&](int j) { return (data_[j + 1] - 2.0 * data_[j] + data_[j - 1]) / (h * h); };

  spline_d2_[1] = d2diff(1);
  spline_d2_[M - 2] = d2diff(M - 2);

  // Tridiagonal system for nodes 2..M-3: (1/6) s_{j-1} + (2/3) s_j + (1/6) s_{j+1} = d2diff(j).
  const int m = M - 4;  // unknown count
  if (m > 0) {
    std::vector<Matrix> rhs(m);
    for (int k = 0; k < m; ++k) rhs[k] = d2diff(k + 2);
    rhs[0] -= (1.0 / 6.0) * spline_d2_[1];
    rhs[m - 1] -= (1.0 / 6.0) * spline_d2_[M - 2];

    // Thomas sweep with constant coefficients a = 1/6, b = 2/3.
    const double a = 1.0 / 6.0;
    const double b = 2.0 / 3.0;
    std::vector<double> cp(m);
    cp[0] = a / b;
    rhs[0] /= b;
    for (int k = 1; k < m; ++k) {
      const double denom = b - a * cp[k - 1];
      cp[k] = a / denom;
      rhs[k] = (rhs[k] - a * rhs[k - 1]) / denom;
    }
    for (int k = m - 2; k >= 0; --k) rhs[k] -= cp[k] * rhs[k + 1];
    for (int k = 0; k < m; ++k) spline_d2_[k + 2] = rhs[k];
  }

  spline_d2_[0] = 2.0 * spline_d2_[1] - spline_d2_[2];
  spline_d2_[M - 1] = 2.0 * spline_d2_[M - 2] - spline_d2_[M - 3];
}

Matrix CurveSpec::eval(double t) const {
  t = clamp_time(t);
  switch (kind_) {
    case CurveKind::constant:
      return data_[0];
    case CurveKind::polynomial: {
      Matrix acc = data_.back();
      for (int i = static_cast<int>(data_.size()) - 2; i >= 0; --i) acc = acc * t + data_[i];
      return acc;
    }
    case CurveKind::sampled: {
      const int M = static_cast<int>(data_.size());
      const double h = 1.0 / (M - 1);
      const int j = std::min(static_cast<int>(t / h), M - 2);
      const double u = t / h - j;
      const double v = 1.0 - u;
      return v * data_[j] + u * data_[j + 1] +
             (h * h / 6.0) * ((v * v * v - v) * spline_d2_[j] + (u * u * u - u) * spline_d2_[j + 1]);
    }
  }
  throw std::logic_error("CurveSpec: bad kind");
}

Matrix CurveSpec::deriv(double t) const {
  t = clamp_time(t);
  switch (kind_) {
    case CurveKind::constant:
      return Matrix::Zero(rows_, cols_);
    case CurveKind::polynomial: {
      if (data_.size() == 1) return Matrix::Zero(rows_, cols_);
      Matrix acc = static_cast<double>(data_.size() - 1) * data_.back();
      for (int i = static_cast<int>(data_.size()) - 2; i >= 1; --i) acc = acc * t + i * data_[i];
      return acc;
    }
    case CurveKind::sampled: {
      const int M = static_cast<int>(data_.size());
      const double h = 1.0 / (M - 1);
      const int j = std::min(static_cast<int>(t / h), M - 2);
      const double u = t / h - j;
      const double v = 1.0 - u;
      return (data_[j + 1] - data_[j]) / h +
             (h / 6.0) * ((1.0 - 3.0 * v * v) * spline_d2_[j] + (3.0 * u * u - 1.0) * spline_d2_[j + 1]);
    }
  }
  throw std::logic_error("CurveSpec: bad kind");
}

Matrix CurveSpec::second_deriv(double t) const {
  t = clamp_time(t);
  switch (kind_) {
    case CurveKind::constant:
      return Matrix::Zero(rows_, cols_);
    case CurveKind::polynomial: {
      if (data_.size() <= 2) return Matrix::Zero(rows_, cols_);
      const int d = static_cast<int>(data_.size()) - 1;
      Matrix acc = static_cast<double>(d * (d - 1)) * data_.back();
      for (int i = d - 1; i >= 2; --i) acc = acc * t + static_cast<double>(i * (i - 1)) * data_[i];
      return acc;
    }
    case CurveKind::sampled: {
      const int M = static_cast<int>(data_.size());
      const double h = 1.0 / (M - 1);
      const int j = std::min(static_cast<int>(t / h), M - 2);
      const double u = t / h - j;
      return (1.0 - u) * spline_d2_[j] + u * spline_d2_[j + 1];
    }
  }
  throw std::logic_error("CurveSpec: bad kind");
}

double CurveSpec::max_norm(int grid_nodes) const {
  double best = 0.0;
  for (int i = 0; i < grid_nodes; ++i) {
    const double t = static_cast<double>(i) / (grid_nodes - 1);
    best = std::max(best, eval(t).norm());
  }
  return best;
}

}  // namespace msturm
