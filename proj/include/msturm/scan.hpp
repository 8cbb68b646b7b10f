#pragma once

#include "msturm/index_form.hpp"
#include "msturm/jacobi.hpp"

#include <string>
#include <vector>

namespace msturm {

/// Scans start here; below sigma_min the index is zero by the small-sigma
/// positivity of the restricted form.
constexpr double kSigmaMin = 1e-2;

/// Index functions along the sigma grid plus the detected instants.
struct IndexScan {
  std::vector<double> sigma_grid;
  std::vector<int> mu;        // index on the affine-constraint space
  std::vector<int> mu0;       // index on the homogeneous-constraint space
  std::vector<int> nullity0;  // numerical nullity on the homogeneous space
  FocalReport focal;
  FocalReport pseudo_focal;
  int mesh_size = 0;
};

IndexScan scan(const MorseSturmProblem& problem, int grid_size, int N);

struct TheoremComparison {
  bool applicable = false;
  int lhs = 0;
  int rhs = 0;
  bool pass = false;
  std::string detail;
};

struct TwoEndpointCheck {
  bool applicable = false;
  bool hypothesis_ok = false;
  int lhs = 0;
  int rhs = 0;
  Inertia correction;
  bool pass = false;
  std::string detail;
};

struct SingularReductionCheck {
  bool applicable = false;
  int lhs = 0;
  int rhs = 0;
  int epsilon = 0;
  bool pass = false;
  std::string detail;
};

struct DistributionCheck {
  std::string id;
  bool applicable = false;
  bool pass = true;
  std::string detail;
};

struct VerificationReport {
  Regime regime = Regime::none;
  IndexScan scan;
  /// One-endpoint identity: index at sigma = 1 equals the pseudo-focal
  /// count with multiplicity on the open interval.
  TheoremComparison index_theorem;
  /// Two-endpoint decomposition: total index = one-endpoint index + the
  /// index of the endpoint form on J_Q.
  TwoEndpointCheck two_endpoint;
  /// Singular case: affine-space index equals the focal count plus the
  /// endpoint-form index on all Jacobi fields ending in Q, with epsilon 0.
  SingularReductionCheck singular_reduction;
  /// Jump-sum identity: mu0(1) - mu0(sigma_min) equals the summed nullity
  /// at the interior degeneracy instants.
  TheoremComparison jump_sum;
  std::vector<DistributionCheck> distribution_checks;

  bool all_pass() const;
};

VerificationReport verify(const MorseSturmProblem& problem, int grid_size, int N);

}  // namespace msturm
