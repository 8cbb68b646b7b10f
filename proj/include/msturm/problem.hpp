#pragma once

#include "msturm/curve.hpp"
#include "msturm/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace msturm {

struct Tolerances {
  int ode_steps = 2048;
  double rank_tol = 1e-8;
  double kernel_tol = 1e-9;
  double bisect_tol = 1e-10;
};

/// Number of uniform nodes on [0,1] used for all validation-grid checks.
constexpr int kValidationNodes = 257;

enum class YKind { admissible, singular, generic };

struct YClassification {
  YKind kind = YKind::generic;
  double m_at_zero_norm = 0.0;
  double max_m_norm = 0.0;
};

/// Which hypothesis of the index theorems the problem satisfies.
/// `none` means Y is generic and Y(0) is orthogonal to P; index and scan
/// operations refuse such problems.
enum class Regime { singular, admissible, not_orthogonal, none };

std::string to_string(Regime r);
std::string to_string(YKind k);

struct ValidationReport {
  bool ok = false;
  Regime regime = Regime::none;
  YClassification classification;
  bool y0_orthogonal_to_P = false;
  double max_jacobi_residual = 0.0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

/// Initial data for a linear second-order system V'' = R(t)V with an
/// indefinite metric g, a timelike solution Y, an initial subspace P with
/// shape operator S_P, and optionally a final subspace Q with S_Q.
class MorseSturmProblem {
 public:
  MorseSturmProblem(MetricForm g, CurveSpec R, CurveSpec Y, SubspaceBasis P,
                    Matrix S_P, std::optional<SubspaceBasis> Q = std::nullopt,
                    std::optional<Matrix> S_Q = std::nullopt,
                    Tolerances tol = Tolerances{});

  int dim() const { return g_.dim(); }
  const MetricForm& g() const { return g_; }
  const CurveSpec& R() const { return R_; }
  const CurveSpec& Y() const { return Y_; }
  const SubspaceBasis& P() const { return P_; }
  const Matrix& S_P() const { return S_P_; }
  bool has_Q() const { return Q_.has_value(); }
  const SubspaceBasis& Q() const { return *Q_; }
  const Matrix& S_Q() const { return *S_Q_; }
  const Tolerances& tol() const { return tol_; }

  /// Replaces Y, keeping everything else (used by the perturbation ops).
  MorseSturmProblem with_Y(CurveSpec Y) const;

 private:
  MetricForm g_;
  CurveSpec R_;
  CurveSpec Y_;
  SubspaceBasis P_;
  Matrix S_P_;
  std::optional<SubspaceBasis> Q_;
  std::optional<Matrix> S_Q_;
  Tolerances tol_;
};

/// The obstruction field 2 Y'/g(Y,Y) - 2 Y g(Y,Y')/g(Y,Y)^2. Vanishes
/// identically iff Y and Y' are everywhere linearly dependent.
Vector m_of_Y(const MorseSturmProblem& problem, double t);

YClassification classify_Y(const MorseSturmProblem& problem);

/// Uniform sampling range for the perturbation search.
struct SearchRange {
  double lo = -0.5;
  double hi = 0.5;
  int count = 9;
};

struct PerturbationResult {
  double a = 0.0;
  double b = 0.0;
  MorseSturmProblem problem;
};

/// Replaces a non-admissible Y by Y + (a + b t) e for the smallest (a,b)
/// in the search grid making the result timelike and admissible. e must be
/// a lightlike or spacelike direction annihilated by R(t).
PerturbationResult perturb_to_admissible(const MorseSturmProblem& problem,
                                         const Vector& e,
                                         const SearchRange& a_range = {},
                                         const SearchRange& b_range = {});

/// Projects Y pointwise onto the g-orthogonal complement of a spacelike
/// direction e with R(t)e = 0; the result is timelike and g-orthogonal to e.
MorseSturmProblem orthogonalize_Y(const MorseSturmProblem& problem, const Vector& e);

ValidationReport validate(const MorseSturmProblem& problem);

/// Throws RegimeError unless the problem validates with a usable regime.
/// Returns the report for reuse.
ValidationReport require_valid_regime(const MorseSturmProblem& problem);

/// Largest value of |Y'' - R Y| over the validation grid.
double max_jacobi_residual(const MorseSturmProblem& problem);

}  // namespace msturm
