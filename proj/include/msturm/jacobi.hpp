#pragma once

#include "msturm/problem.hpp"

#include <functional>
#include <string>
#include <vector>

namespace msturm {

/// Time-sampled solution of V'' = R(t)V + forcing on [0, sigma], with its
/// derivative and the constant C_V = g(V',Y) - g(V,Y') taken at t = 0.
struct FieldSolution {
  double sigma = 1.0;
  std::vector<double> grid;
  std::vector<Vector> values;
  std::vector<Vector> derivs;
  double C_V = 0.0;
  double max_constraint_drift = 0.0;  // max_t |C_V(t) - C_V(0)|
  double richardson_error = 0.0;      // endpoint half-step estimate

  const Vector& value0() const { return values.front(); }
  const Vector& deriv0() const { return derivs.front(); }
};

struct FocalInstant {
  double t = 0.0;
  int multiplicity = 0;
  double residual = 0.0;  // smallest relative singular value at the instant
  bool nondegenerate = false;
};

struct FocalReport {
  std::string kind;  // "focal" or "pseudo_focal"
  std::vector<FocalInstant> instants;

  int total_multiplicity(double below = 1.0 + 1e-12) const;
};

using Forcing = std::function<Vector(double)>;

/// Fixed-step RK4 integration of V'' = R(t)V + forcing with ode_steps steps
/// on [0, sigma]. Throws NumericsError when the half-step Richardson
/// estimate exceeds the error budget.
FieldSolution integrate_field(const MorseSturmProblem& problem, const Vector& V0,
                              const Vector& V0p, const Forcing& forcing, double sigma);

/// State (V, V') of a stored solution at an arbitrary t in [0, sigma],
/// re-integrated from the nearest grid node below t.
std::pair<Vector, Vector> eval_solution(const MorseSturmProblem& problem,
                                        const FieldSolution& sol, const Forcing& forcing,
                                        double t);

/// n solutions spanning the initial conditions V(0) in P,
/// V'(0) + S_P[V(0)] in the g-orthogonal complement of P.
std::vector<FieldSolution> p_jacobi_basis(const MorseSturmProblem& problem,
                                          double sigma = 1.0);

/// Rank-drop scan of the matrix of basis values over [t_lo, 1], with
/// bisection refinement of each candidate instant.
FocalReport focal_instants(const MorseSturmProblem& problem, double t_lo = 1e-3);

struct JacobiValueSpaces {
  SubspaceBasis J_span;       // values of C_J = 0 solutions at t
  SubspaceBasis J_star_span;  // values of all P-Jacobi solutions at t
};

JacobiValueSpaces jacobi_value_spaces(const MorseSturmProblem& problem, double t);

namespace detail {

/// Shared rank-drop + refinement machinery; columns(t) must return the
/// matrix whose column space is scanned for dimension drops.
FocalReport detect_rank_drops(const MorseSturmProblem& problem,
                              const std::function<Matrix(double)>& columns,
                              const std::function<Matrix(double)>& column_derivs,
                              double t_lo, const std::string& kind);

}  // namespace detail

}  // namespace msturm
