#include "msturm/problem.hpp"

#include "msturm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace msturm {

namespace {

double validation_node(int i) { return static_cast<double>(i) / (kValidationNodes - 1); }

// Pointwise upper bound for |m(Y)(t)| from the magnitudes of its two terms;
// used as the relative scale in the classification thresholds.
double m_term_scale(const MorseSturmProblem& p, double t) {
  const Vector y = p.Y().eval_vec(t);
  const Vector yp = p.Y().deriv_vec(t);
  const double gyy = p.g().inner(y, y);
  const double gyyp = p.g().inner(y, yp);
  if (gyy >= 0.0) return 0.0;
  return 2.0 * yp.norm() / std::abs(gyy) + 2.0 * y.norm() * std::abs(gyyp) / (gyy * gyy);
}

CurveSpec add_affine_multiple(const CurveSpec& Y, double a, double b, const Vector& e) {
  switch (Y.kind()) {
    case CurveKind::constant: {
      if (b == 0.0) return CurveSpec::constant(Y.payload()[0] + a * e);
      std::vector<Matrix> coeffs = {Y.payload()[0] + a * e, Matrix(b * e)};
      return CurveSpec::polynomial(std::move(coeffs));
    }
    case CurveKind::polynomial: {
      std::vector<Matrix> coeffs = Y.payload();
      coeffs[0] += a * e;
      if (b != 0.0) {
        if (coeffs.size() < 2) coeffs.push_back(Matrix::Zero(e.size(), 1));
        coeffs[1] += b * e;
      }
      return CurveSpec::polynomial(std::move(coeffs));
    }
    case CurveKind::sampled: {
      std::vector<Matrix> samples = Y.payload();
      const int M = static_cast<int>(samples.size());
      for (int i = 0; i < M; ++i) {
        const double t = static_cast<double>(i) / (M - 1);
        samples[i] += (a + b * t) * e;
      }
      return CurveSpec::sampled(std::move(samples));
    }
  }
  throw std::logic_error("add_affine_multiple: bad kind");
}

void check_annihilated_by_R(const MorseSturmProblem& p, const Vector& e, const char* who) {
  double max_R = 0.0;
  double max_Re = 0.0;
  for (int i = 0; i < kValidationNodes; ++i) {
    const Matrix R = p.R().eval(validation_node(i));
    max_R = std::max(max_R, R.norm());
    max_Re = std::max(max_Re, (R * e).norm());
  }
  if (max_Re > p.tol().rank_tol * (1.0 + max_R) * e.norm()) {
    throw std::invalid_argument(std::string(who) + ": direction is not annihilated by R(t)");
  }
}

bool timelike_on_grid(const MorseSturmProblem& p, const CurveSpec& Y) {
  const double max_Y = Y.max_norm(kValidationNodes);
  const double margin = 1e-10 * (1.0 + max_Y * max_Y);
  for (int i = 0; i < kValidationNodes; ++i) {
    const Vector y = Y.eval_vec(validation_node(i));
    if (p.g().inner(y, y) >= -margin) return false;
  }
  return true;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::singular: return "singular";
    case Regime::admissible: return "admissible";
    case Regime::not_orthogonal: return "not_orthogonal";
    case Regime::none: return "none";
  }
  return "none";
}

std::string to_string(YKind k) {
  switch (k) {
    case YKind::admissible: return "admissible";
    case YKind::singular: return "singular";
    case YKind::generic: return "generic";
  }
  return "generic";
}

MorseSturmProblem::MorseSturmProblem(MetricForm g, CurveSpec R, CurveSpec Y,
                                     SubspaceBasis P, Matrix S_P,
                                     std::optional<SubspaceBasis> Q,
                                     std::optional<Matrix> S_Q, Tolerances tol)
    : g_(std::move(g)),
      R_(std::move(R)),
      Y_(std::move(Y)),
      P_(std::move(P)),
      S_P_(std::move(S_P)),
      Q_(std::move(Q)),
      S_Q_(std::move(S_Q)),
      tol_(tol) {
  const int n = g_.dim();
  if (R_.rows() != n || R_.cols() != n) throw SchemaError("problem: R must be n x n");
  if (Y_.rows() != n || Y_.cols() != 1) throw SchemaError("problem: Y must be an n-vector curve");
  if (P_.ambient_dim() != n) throw SchemaError("problem: P lives in the wrong space");
  if (S_P_.rows() != P_.dim() || S_P_.cols() != P_.dim()) {
    throw SchemaError("problem: S_P must act on P's coordinates");
  }
  if (Q_.has_value()) {
    if (Q_->ambient_dim() != n) throw SchemaError("problem: Q lives in the wrong space");
    if (!S_Q_.has_value()) S_Q_ = Matrix::Zero(Q_->dim(), Q_->dim());
    if (S_Q_->rows() != Q_->dim() || S_Q_->cols() != Q_->dim()) {
      throw SchemaError("problem: S_Q must act on Q's coordinates");
    }
  } else if (S_Q_.has_value()) {
    throw SchemaError("problem: S_Q given without Q");
  }
  if (tol_.ode_steps < 16) throw SchemaError("problem: ode_steps too small");
}

MorseSturmProblem MorseSturmProblem::with_Y(CurveSpec Y) const {
  MorseSturmProblem out = *this;
  out.Y_ = std::move(Y);
  return out;
}

Vector m_of_Y(const MorseSturmProblem& problem, double t) {
  const Vector y = problem.Y().eval_vec(t);
  const Vector yp = problem.Y().deriv_vec(t);
  const double gyy = problem.g().inner(y, y);
  if (gyy >= -1e-14 * (1.0 + y.squaredNorm())) {
    throw std::invalid_argument("m_of_Y: Y is not timelike at t");
  }
  const double gyyp = problem.g().inner(y, yp);
  return 2.0 * yp / gyy - 2.0 * y * gyyp / (gyy * gyy);
}

YClassification classify_Y(const MorseSturmProblem& problem) {
  double max_m = 0.0;
  double scale = 0.0;
  for (int i = 0; i < kValidationNodes; ++i) {
    const double t = validation_node(i);
    max_m = std::max(max_m, m_of_Y(problem, t).norm());
    scale = std::max(scale, m_term_scale(problem, t));
  }
  YClassification out;
  out.m_at_zero_norm = m_of_Y(problem, 0.0).norm();
  out.max_m_norm = max_m;
  const double thresh = problem.tol().rank_tol * scale;
  if (max_m <= thresh) {
    out.kind = YKind::singular;
  } else if (out.m_at_zero_norm > thresh) {
    out.kind = YKind::admissible;
  } else {
    out.kind = YKind::generic;
  }
  return out;
}

PerturbationResult perturb_to_admissible(const MorseSturmProblem& problem,
                                         const Vector& e,
                                         const SearchRange& a_range,
                                         const SearchRange& b_range) {
  if (e.size() != problem.dim()) {
    throw std::invalid_argument("perturb_to_admissible: direction dimension mismatch");
  }
  const double gee = problem.g().inner(e, e);
  if (gee < -1e-12 * e.squaredNorm()) {
    throw RegimeError("perturb_to_admissible: timelike geodesic (need lightlike or spacelike)");
  }
  check_annihilated_by_R(problem, e, "perturb_to_admissible");

  if (classify_Y(problem).kind == YKind::admissible) {
    return PerturbationResult{0.0, 0.0, problem};
  }

  auto values = [](const SearchRange& r) {
    std::vector<double> v;
    if (r.count <= 1) {
      v.push_back(r.lo);
      return v;
    }
    for (int i = 0; i < r.count; ++i) {
      v.push_back(r.lo + (r.hi - r.lo) * i / (r.count - 1));
    }
    return v;
  };

  std::vector<std::pair<double, double>> candidates;
  for (double a : values(a_range)) {
    for (double b : values(b_range)) {
      if (a == 0.0 && b == 0.0) continue;
      candidates.emplace_back(a, b);
    }
  }
  // Smallest perturbation first; nonnegative values win ties.
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& l, const auto& r) {
    const auto key = [](const std::pair<double, double>& c) {
      return std::make_tuple(std::abs(c.first) + std::abs(c.second), std::abs(c.first),
                             std::abs(c.second), c.first < 0.0, c.second < 0.0);
    };
    return key(l) < key(r);
  });

  for (const auto& [a, b] : candidates) {
    CurveSpec Ybar = add_affine_multiple(problem.Y(), a, b, e);
    if (!timelike_on_grid(problem, Ybar)) continue;
    MorseSturmProblem perturbed = problem.with_Y(std::move(Ybar));
    if (classify_Y(perturbed).kind == YKind::admissible) {
      return PerturbationResult{a, b, std::move(perturbed)};
    }
  }
  throw NumericsError("perturb_to_admissible: no admissible perturbation found in range");
}

MorseSturmProblem orthogonalize_Y(const MorseSturmProblem& problem, const Vector& e) {
  if (e.size() != problem.dim()) {
    throw std::invalid_argument("orthogonalize_Y: direction dimension mismatch");
  }
  const double gee = problem.g().inner(e, e);
  if (gee <= 1e-12 * e.squaredNorm()) {
    throw RegimeError("orthogonalize_Y: direction must be spacelike");
  }
  check_annihilated_by_R(problem, e, "orthogonalize_Y");

  const CurveSpec& Y = problem.Y();
  auto project = [&](const Matrix& value) -> Matrix {
    const Vector v = value.col(0);
    return value - (problem.g().inner(v, e) / gee) * e;
  };
  std::vector<Matrix> data;
  for (const Matrix& m : Y.payload()) data.push_back(project(m));
  CurveSpec Ybar = [&] {
    switch (Y.kind()) {
      case CurveKind::constant: return CurveSpec::constant(std::move(data[0]));
      case CurveKind::polynomial: return CurveSpec::polynomial(std::move(data));
      case CurveKind::sampled: return CurveSpec::sampled(std::move(data));
    }
    throw std::logic_error("orthogonalize_Y: bad kind");
  }();
  if (!timelike_on_grid(problem, Ybar)) {
    throw NumericsError("orthogonalize_Y: projected field is not timelike");
  }
  return problem.with_Y(std::move(Ybar));
}

double max_jacobi_residual(const MorseSturmProblem& problem) {
  double worst = 0.0;
  for (int i = 0; i < kValidationNodes; ++i) {
    const double t = validation_node(i);
    const Vector y = problem.Y().eval_vec(t);
    const Vector ypp = problem.Y().second_deriv_vec(t);
    worst = std::max(worst, (ypp - problem.R().eval(t) * y).norm());
  }
  return worst;
}

ValidationReport validate(const MorseSturmProblem& problem) {
  ValidationReport report;
  const MetricForm& g = problem.g();
  const Tolerances& tol = problem.tol();

  double max_R = 0.0;
  double max_Y = 0.0;
  double worst_gsym = 0.0;
  bool timelike = true;
  for (int i = 0; i < kValidationNodes; ++i) {
    const double t = validation_node(i);
    const Matrix R = problem.R().eval(t);
    const Matrix gR = g.entries() * R;
    worst_gsym = std::max(worst_gsym, (gR - gR.transpose()).norm() / std::max(gR.norm(), 1e-300));
    max_R = std::max(max_R, R.norm());
    const Vector y = problem.Y().eval_vec(t);
    max_Y = std::max(max_Y, y.norm());
    if (g.inner(y, y) >= -1e-10 * (1.0 + y.squaredNorm())) timelike = false;
  }
  if (worst_gsym > tol.rank_tol) {
    report.failures.push_back("R is not g-symmetric on the validation grid");
  }
  if (!timelike) report.failures.push_back("Y is not timelike on the validation grid");

  report.max_jacobi_residual = max_jacobi_residual(problem);
  {
    // Spline differentiation of a sampled Y limits how small the residual
    // can be; widen the budget with the square of its grid spacing.
    double factor = 1e-8;
    if (problem.Y().kind() == CurveKind::sampled) {
      const double h = 1.0 / (static_cast<double>(problem.Y().payload().size()) - 1.0);
      factor = std::max(factor, 40.0 * h * h);
    }
    const double budget = factor * (1.0 + max_R) * (1.0 + max_R) * (1.0 + max_Y);
    if (report.max_jacobi_residual > budget) {
      report.failures.push_back("Y does not satisfy Y'' = R Y within tolerance");
    }
  }

  if (!is_nondegenerate(g, problem.P(), tol.rank_tol)) {
    report.failures.push_back("P is g-degenerate");
  }
  if (problem.has_Q() && !is_nondegenerate(g, problem.Q(), tol.rank_tol)) {
    report.failures.push_back("Q is g-degenerate");
  }

  auto check_shape_operator = [&](const SubspaceBasis& sub, const Matrix& S, const char* name) {
    if (sub.is_zero()) return;
    const Matrix B = sub.column_matrix();
    const Matrix gram = B.transpose() * g.entries() * B;
    const Matrix gs = gram * S;
    if ((S.transpose() * gram - gs).norm() > tol.rank_tol * std::max(gs.norm(), 1.0)) {
      report.failures.push_back(std::string(name) + " is not g-symmetric on its subspace");
    }
  };
  check_shape_operator(problem.P(), problem.S_P(), "S_P");
  if (problem.has_Q()) check_shape_operator(problem.Q(), problem.S_Q(), "S_Q");

  if (timelike) {
    report.classification = classify_Y(problem);
  } else {
    report.classification = YClassification{};
  }

  const Vector y0 = problem.Y().eval_vec(0.0);
  report.y0_orthogonal_to_P = true;
  for (const Vector& p : problem.P().vectors()) {
    if (std::abs(g.inner(y0, p)) > tol.rank_tol * y0.norm() * p.norm()) {
      report.y0_orthogonal_to_P = false;
      break;
    }
  }
  if (problem.P().is_zero()) report.notes.push_back("Y(0) orthogonal to P vacuously (P = {0})");

  switch (report.classification.kind) {
    case YKind::singular: report.regime = Regime::singular; break;
    case YKind::admissible: report.regime = Regime::admissible; break;
    case YKind::generic:
      report.regime = report.y0_orthogonal_to_P ? Regime::none : Regime::not_orthogonal;
      break;
  }
  if (report.regime == Regime::none) {
    report.notes.push_back("index theorem hypotheses fail: Y generic and Y(0) orthogonal to P");
  }

  report.ok = report.failures.empty();
  return report;
}

ValidationReport require_valid_regime(const MorseSturmProblem& problem) {
  ValidationReport report = validate(problem);
  if (!report.ok) {
    std::string what = "invalid problem:";
    for (const auto& f : report.failures) what += " " + f + ";";
    throw RegimeError(what);
  }
  if (report.regime == Regime::none) {
    throw RegimeError("regime error: Y is generic and Y(0) is orthogonal to P");
  }
  return report;
}

}  // namespace msturm
