#include "msturm/generators.hpp"

#include "msturm/errors.hpp"
#include "msturm/jacobi.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <random>

namespace msturm {

namespace {

Matrix minkowski(int n) {
  Matrix g = Matrix::Identity(n, n);
  g(0, 0) = -1.0;
  return g;
}

// Uniform double in [0,1) from the top 53 bits; keeps the stream
// independent of any library distribution implementation.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace

MorseSturmProblem flat_problem(int n, FlatPChoice choice) {
  if (n < 2) throw std::invalid_argument("flat_problem: need n >= 2");
  MetricForm g(minkowski(n));
  CurveSpec R = CurveSpec::constant(Matrix::Zero(n, n));
  CurveSpec Y = CurveSpec::constant(Vector::Unit(n, 0));

  SubspaceBasis P = SubspaceBasis::zero(n);
  Matrix S_P(0, 0);
  if (choice == FlatPChoice::spacelike_hyperplane) {
    std::vector<Vector> vecs;
    for (int i = 1; i < n; ++i) vecs.push_back(Vector::Unit(n, i));
    P = SubspaceBasis(n, std::move(vecs));
    S_P = Matrix::Zero(n - 1, n - 1);
  }
  return MorseSturmProblem(std::move(g), std::move(R), std::move(Y), std::move(P),
                           std::move(S_P));
}

MorseSturmProblem static_constant_curvature_problem(double k, bool with_endpoint) {
  if (!(k > 0.0)) throw std::invalid_argument("static_constant_curvature_problem: k must be > 0");
  const int n = 3;
  MetricForm g(minkowski(n));
  Matrix Rmat = Matrix::Zero(n, n);
  Rmat(2, 2) = -k;
  CurveSpec R = CurveSpec::constant(Rmat);
  CurveSpec Y = CurveSpec::constant(Vector::Unit(n, 0));
  SubspaceBasis P = SubspaceBasis::zero(n);

  std::optional<SubspaceBasis> Q;
  std::optional<Matrix> S_Q;
  if (with_endpoint) {
    Q = SubspaceBasis(n, {Vector::Unit(n, 2)});
    S_Q = Matrix::Zero(1, 1);
  }
  return MorseSturmProblem(std::move(g), std::move(R), std::move(Y), std::move(P), Matrix(0, 0),
                           std::move(Q), std::move(S_Q));
}

MorseSturmProblem flat_admissible_problem() {
  const int n = 2;
  MetricForm g(minkowski(n));
  CurveSpec R = CurveSpec::constant(Matrix::Zero(n, n));
  std::vector<Matrix> coeffs = {Vector::Unit(n, 0), Matrix(0.5 * Vector::Unit(n, 1))};
  CurveSpec Y = CurveSpec::polynomial(std::move(coeffs));
  return MorseSturmProblem(std::move(g), std::move(R), std::move(Y), SubspaceBasis::zero(n),
                           Matrix(0, 0));
}

MorseSturmProblem random_problem(std::uint64_t seed, int degree, double norm_bound) {
  const int n = 3;
  const Matrix G = minkowski(n);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);

  constexpr int kBudget = 200;
  for (int attempt = 0; attempt < kBudget; ++attempt) {
    // g-symmetric polynomial R: each coefficient is G^{-1} * symmetric.
    std::vector<Matrix> coeffs;
    for (int d = 0; d <= degree; ++d) {
      Matrix S(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          S(i, j) = S(j, i) = uniform(rng, -1.0, 1.0);
        }
      }
      coeffs.push_back(G.inverse() * S);
    }
    // Scale so the max norm over [0,1] lands in a usable band below the cap.
    double max_norm = 0.0;
    for (int i = 0; i < kValidationNodes; ++i) {
      const double t = static_cast<double>(i) / (kValidationNodes - 1);
      Matrix acc = coeffs.back();
      for (int d = degree - 1; d >= 0; --d) acc = acc * t + coeffs[d];
      max_norm = std::max(max_norm, acc.norm());
    }
    const double target = norm_bound * uniform(rng, 0.15, 0.95);
    if (max_norm > 0.0) {
      for (Matrix& c : coeffs) c *= target / max_norm;
    }
    CurveSpec R = CurveSpec::polynomial(coeffs);

    // Timelike initial data with a moderate spacelike component.
    Vector Y0 = Vector::Unit(n, 0);
    Y0(1) = uniform(rng, -0.3, 0.3);
    Y0(2) = uniform(rng, -0.3, 0.3);
    Vector Y0p(n);
    for (int i = 0; i < n; ++i) Y0p(i) = uniform(rng, -0.4, 0.4);

    // Integrate Y'' = R Y and store it as a sampled curve.
    constexpr int kYNodes = 2049;
    Tolerances tmp_tol;
    tmp_tol.ode_steps = kYNodes - 1;
    MorseSturmProblem carrier(MetricForm(G), R, CurveSpec::constant(Y0),
                              SubspaceBasis::zero(n), Matrix(0, 0), std::nullopt, std::nullopt,
                              tmp_tol);
    const FieldSolution ysol = integrate_field(carrier, Y0, Y0p, nullptr, 1.0);
    bool timelike = true;
    std::vector<Matrix> samples;
    samples.reserve(kYNodes);
    for (const Vector& y : ysol.values) {
      if (y.dot(G * y) >= -0.05) timelike = false;
      samples.push_back(y);
    }
    if (!timelike) continue;
    CurveSpec Y = CurveSpec::sampled(std::move(samples));

    // Random spacelike subspace: dim 0, 1 or 2, orthogonal within the
    // spacelike coordinate plane rotated by a random angle.
    const int pdim = static_cast<int>(uniform01(rng) * 3.0) % 3;
    std::vector<Vector> pvecs;
    const double angle = uniform(rng, 0.0, 2.0 * M_PI);
    Vector u1 = Vector::Zero(n), u2 = Vector::Zero(n);
    u1(1) = std::cos(angle);
    u1(2) = std::sin(angle);
    u2(1) = -std::sin(angle);
    u2(2) = std::cos(angle);
    if (pdim >= 1) pvecs.push_back(u1);
    if (pdim >= 2) pvecs.push_back(u2);
    SubspaceBasis P(n, pvecs);

    Matrix S_P(pdim, pdim);
    if (pdim > 0) {
      Matrix F(pdim, pdim);
      for (int i = 0; i < pdim; ++i) {
        for (int j = i; j < pdim; ++j) F(i, j) = F(j, i) = uniform(rng, -2.0, 2.0);
      }
      const Matrix B = P.column_matrix();
      S_P = (B.transpose() * G * B).inverse() * F;
    }

    MorseSturmProblem problem(MetricForm(G), std::move(R), std::move(Y), std::move(P),
                              std::move(S_P));
    if (!validate(problem).ok) continue;
    return problem;
  }
  throw NumericsError("random_problem: resampling budget exhausted for seed " +
                      std::to_string(seed));
}

int riemannian_reduced_index(const MorseSturmProblem& problem, int N) {
  const int n = problem.dim();
  if (problem.Y().kind() != CurveKind::constant ||
      (problem.Y().eval_vec(0.0) - Vector::Unit(n, 0)).norm() > 1e-12) {
    throw std::invalid_argument("riemannian_reduced_index: needs constant Y = e0");
  }
  if (!problem.P().is_zero()) {
    throw std::invalid_argument("riemannian_reduced_index: only the P = {0} case is supported");
  }
  const Matrix& G = problem.g().entries();
  if (G.row(0).tail(n - 1).norm() > 1e-12) {
    throw std::invalid_argument("riemannian_reduced_index: metric must be block diagonal");
  }

  // Assemble int |V'|^2 + (G~ R~ V, V) dt on pinned-endpoint hats in R^{n-1},
  // with the Y-direction row and column deleted. No constraint.
  const int m = n - 1;
  const double h = 1.0 / N;
  const int dof = m * (N - 1);
  const Matrix Gr = G.bottomRightCorner(m, m);
  Matrix A = Matrix::Zero(dof, dof);
  const std::array<double, 3> xi{0.5 - std::sqrt(3.0 / 5.0) / 2.0, 0.5,
                                 0.5 + std::sqrt(3.0 / 5.0) / 2.0};
  const std::array<double, 3> w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  for (int i = 0; i < N; ++i) {
    Matrix K00 = Gr / h, K11 = Gr / h, K01 = -Gr / h;
    for (int q = 0; q < 3; ++q) {
      const double t = (i + xi[q]) * h;
      const Matrix Rr = problem.R().eval(t).bottomRightCorner(m, m);
      const Matrix K = 0.5 * (Gr * Rr + (Gr * Rr).transpose()) * (w[q] * h);
      K00 += (1.0 - xi[q]) * (1.0 - xi[q]) * K;
      K11 += xi[q] * xi[q] * K;
      K01 += (1.0 - xi[q]) * xi[q] * K;
    }
    auto add = [&](int a, int b, const Matrix& K) {
      if (a == 0 || a == N || b == 0 || b == N) return;  // pinned endpoints
      A.block((a - 1) * m, (b - 1) * m, m, m) += K;
    };
    add(i, i, K00);
    add(i + 1, i + 1, K11);
    add(i, i + 1, K01);
    add(i + 1, i, K01.transpose());
  }
  const Inertia sig = inertia(0.5 * (A + A.transpose()), problem.tol().kernel_tol);
  return sig.n_minus;
}

}  // namespace msturm
