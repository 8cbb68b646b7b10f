#pragma once

#include "msturm/problem.hpp"

namespace msturm {

/// Piecewise-linear nodal discretization of fields on [0,1] with values in
/// R^n, boundary value at 0 constrained to P and at 1 to {0} (or Q in the
/// two-endpoint case).
struct DiscreteSpace {
  int mesh_size = 0;  // number of cells
  int n = 0;
  int dof_count = 0;
  Matrix P_basis;  // n x dim P
  Matrix Q_basis;  // n x dim Q (n x 0 when the right endpoint is pinned)
};

DiscreteSpace discrete_space(const MorseSturmProblem& problem, int N, bool two_endpoint);

enum class SpaceKind { h0, hstar };

/// Discrete fields satisfying the cell-averaged constraint
/// g(V',Y(sigma t)) - sigma g(V,Y'(sigma t)) = 0 (h0) or = constant (hstar).
/// At sigma = 0 the h0 constraint degenerates to g(V, Y(0)) = 0.
struct ConstrainedSubspace {
  DiscreteSpace space;
  double sigma = 1.0;
  SpaceKind kind = SpaceKind::h0;
  Matrix kernel;  // dof_count x m, orthonormal columns
};

struct IndexResult {
  int n_minus = 0;
  int nullity = 0;
  int mesh_size = 0;
  double sigma = 1.0;
  double smallest_abs_eigenvalue = 0.0;
};

/// Gram matrix of C_sigma(V,W) = int g(V',W') + sigma^2 g(R(sigma t)V, W) dt
/// - sigma g(S_P V(0), W(0)) on the one-endpoint discrete space.
Matrix assemble_reparametrized_form(const MorseSturmProblem& problem, double sigma, int N);

/// Gram matrix of the two-endpoint form at sigma = 1, with the S_Q endpoint
/// term, on the discrete space with V(1) in Q.
Matrix assemble_two_endpoint_form(const MorseSturmProblem& problem, int N);

ConstrainedSubspace constraint_kernel(const MorseSturmProblem& problem, double sigma, int N,
                                      SpaceKind kind, bool two_endpoint = false);

IndexResult index_and_nullity(const MorseSturmProblem& problem, double sigma, int N,
                              SpaceKind kind);

/// Both restrictions at one sigma, sharing the assembled form.
std::pair<IndexResult, IndexResult> index_pair_h0_hstar(const MorseSturmProblem& problem,
                                                        double sigma, int N);

/// n_-(hstar restriction) - n_-(h0 restriction) at sigma = 1; always 0 or 1.
int epsilon_invariant(const MorseSturmProblem& problem, int N);

struct TwoEndpointResult {
  IndexResult total;
  Inertia correction;       // inertia of the endpoint form on J_Q
  bool decomposition_valid = false;  // J[1] contains Q
  int jq_dim = 0;
};

TwoEndpointResult two_endpoint_index(const MorseSturmProblem& problem, int N);

/// Inertia of F(J1,J2) = g(S_Q[J1(1)],J2(1)) + g(J1'(1),J2(1)) on the
/// P-Jacobi fields with J(1) in Q, optionally restricted to C_J = 0.
Inertia endpoint_form_inertia(const MorseSturmProblem& problem, bool restrict_to_C0);

}  // namespace msturm
