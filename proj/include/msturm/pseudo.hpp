#pragma once

#include "msturm/jacobi.hpp"

namespace msturm {

/// Solution of V'' - R(t)V = lambda * m(Y) satisfying g(V',Y) - g(V,Y') = 0
/// and the modified initial conditions. lambda is fixed to zero when Y is
/// singular.
struct PseudoField {
  FieldSolution solution;
  double lambda = 0.0;
};

/// Basis of the constrained solution space. Dimension n in the admissible
/// and non-orthogonal regimes; n or n-1 in the singular regime depending on
/// whether the constraint is trivial on the initial data.
std::vector<PseudoField> pseudo_basis(const MorseSturmProblem& problem, double sigma = 1.0);

FocalReport pseudo_focal_instants(const MorseSturmProblem& problem, double t_lo = 1e-3);

}  // namespace msturm
