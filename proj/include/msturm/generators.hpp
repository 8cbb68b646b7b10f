#pragma once

#include "msturm/problem.hpp"

#include <cstdint>

namespace msturm {

enum class FlatPChoice { point, spacelike_hyperplane };

/// Minkowski sanity case: g = diag(-1,1,...,1), R = 0, Y = e0.
MorseSturmProblem flat_problem(int n, FlatPChoice choice = FlatPChoice::point);

/// Horizontal geodesic in a product of a constant-curvature surface with a
/// static time axis: n = 3, Y = e0 (singular), R = diag(0,0,-k), P = {0}.
/// With `with_endpoint`, adds Q spanned by the curved transverse direction
/// e2 and S_Q = 0.
MorseSturmProblem static_constant_curvature_problem(double k, bool with_endpoint = false);

/// n = 2 flat problem with the admissible field Y(t) = (1, t/2), P = {0}.
MorseSturmProblem flat_admissible_problem();

/// Seed-deterministic random instance: polynomial g-symmetric R of the
/// given degree with max norm <= norm_bound, Y integrated from random
/// timelike initial data (resampled until g(Y,Y) <= -0.05 throughout),
/// random spacelike g-nondegenerate P with random symmetric S_P.
MorseSturmProblem random_problem(std::uint64_t seed, int degree = 2, double norm_bound = 20.0);

/// Index of the purely Riemannian problem obtained by deleting the
/// Y-direction row and column (requires constant Y = e0 and a block metric);
/// the full discrete form with no constraint, on the same mesh.
int riemannian_reduced_index(const MorseSturmProblem& problem, int N);

}  // namespace msturm
