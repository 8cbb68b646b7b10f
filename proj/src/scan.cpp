#include "msturm/scan.hpp"

#include "msturm/errors.hpp"
#include "msturm/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace msturm {

namespace {

constexpr double kDefaultTLo = 1e-3;
constexpr double kInstantMatchTol = 1e-6;

// Multiplicity recorded at t in the report, 0 when absent.
int multiplicity_at(const FocalReport& report, double t) {
  for (const auto& inst : report.instants) {
    if (std::abs(inst.t - t) <= kInstantMatchTol) return inst.multiplicity;
  }
  return 0;
}

std::string format_t(double t) {
  std::ostringstream os;
  os.precision(10);
  os << t;
  return os.str();
}

}  // namespace

bool VerificationReport::all_pass() const {
  if (index_theorem.applicable && !index_theorem.pass) return false;
  if (two_endpoint.applicable && !two_endpoint.pass) return false;
  if (singular_reduction.applicable && !singular_reduction.pass) return false;
  if (jump_sum.applicable && !jump_sum.pass) return false;
  for (const auto& check : distribution_checks) {
    if (check.applicable && !check.pass) return false;
  }
  return true;
}

IndexScan scan(const MorseSturmProblem& problem, int grid_size, int N) {
  if (grid_size < 2) throw std::invalid_argument("scan: grid_size must be >= 2");
  require_valid_regime(problem);

  IndexScan out;
  out.mesh_size = N;
  out.sigma_grid.resize(grid_size);
  out.mu.resize(grid_size);
  out.mu0.resize(grid_size);
  out.nullity0.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    out.sigma_grid[i] = kSigmaMin + (1.0 - kSigmaMin) * i / (grid_size - 1);
  }

  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  std::vector<std::string> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = static_cast<int>(w); i < grid_size; i += static_cast<int>(workers)) {
          const auto [h0, hstar] = index_pair_h0_hstar(problem, out.sigma_grid[i], N);
          out.mu0[i] = h0.n_minus;
          out.nullity0[i] = h0.nullity;
          out.mu[i] = hstar.n_minus;
        }
      } catch (const std::exception& e) {
        errors[w] = e.what();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (!err.empty()) throw NumericsError("scan: " + err);
  }

  out.focal = focal_instants(problem, kDefaultTLo);
  out.pseudo_focal = pseudo_focal_instants(problem, kDefaultTLo);
  return out;
}

VerificationReport verify(const MorseSturmProblem& problem, int grid_size, int N) {
  const ValidationReport validation = require_valid_regime(problem);
  VerificationReport report;
  report.regime = validation.regime;
  report.scan = scan(problem, grid_size, N);
  const IndexScan& sc = report.scan;
  const double cell = sc.sigma_grid[1] - sc.sigma_grid[0];
  const int last = static_cast<int>(sc.sigma_grid.size()) - 1;

  // Index at sigma = 1 vs pseudo-focal count with multiplicity on the open
  // interval (a kernel exactly at 1 has not contributed to the index yet).
  {
    auto& check = report.index_theorem;
    check.applicable = true;
    check.lhs = sc.mu0[last];
    check.rhs = sc.pseudo_focal.total_multiplicity(1.0 - 1e-9);
    check.pass = check.lhs == check.rhs;
    if (multiplicity_at(sc.pseudo_focal, 1.0) > 0) {
      check.detail = "boundary instant at sigma=1 excluded from the count";
    }
  }

  // Two-endpoint decomposition.
  {
    auto& check = report.two_endpoint;
    const TwoEndpointResult ter = two_endpoint_index(problem, N);
    check.hypothesis_ok = ter.decomposition_valid;
    check.applicable = ter.decomposition_valid;
    check.correction = ter.correction;
    check.lhs = ter.total.n_minus;
    check.rhs = sc.mu0[last] + ter.correction.n_minus;
    check.pass = !check.applicable || check.lhs == check.rhs;
    if (!ter.decomposition_valid) {
      check.detail = "hypothesis J[1] contains Q fails; decomposition not checked";
    } else if (!problem.has_Q()) {
      check.detail = "Q absent; trivial endpoint space";
    }
  }

  // Singular reduction: affine index equals the focal count plus the
  // endpoint-form index over all Jacobi fields ending in Q, with epsilon 0.
  {
    auto& check = report.singular_reduction;
    const bool star_hypothesis =
        !problem.has_Q() ||
        jacobi_value_spaces(problem, 1.0).J_star_span.contains_subspace(problem.Q(), 1e-6);
    check.applicable = validation.regime == Regime::singular &&
                       validation.y0_orthogonal_to_P && star_hypothesis;
    if (check.applicable) {
      check.epsilon = epsilon_invariant(problem, N);
      check.lhs = sc.mu[last];
      check.rhs = sc.focal.total_multiplicity(1.0 - 1e-9) +
                  endpoint_form_inertia(problem, false).n_minus;
      check.pass = check.lhs == check.rhs && check.epsilon == 0;
    }
  }

  // Jump-sum identity over the interior degeneracy instants, with the
  // nullity measured by the discrete form at each refined instant.
  {
    auto& check = report.jump_sum;
    check.applicable = true;
    check.lhs = sc.mu0[last] - sc.mu0[0];
    int total = 0;
    std::string at;
    for (const auto& inst : sc.pseudo_focal.instants) {
      if (inst.t <= kSigmaMin + 1e-12 || inst.t >= 1.0 - 1e-9) continue;
      const IndexResult res = index_and_nullity(problem, inst.t, N, SpaceKind::h0);
      total += res.nullity;
      at += (at.empty() ? "" : ", ") + format_t(inst.t) + ":" + std::to_string(res.nullity);
    }
    check.rhs = total;
    check.pass = check.lhs == check.rhs;
    check.detail = at.empty() ? "no interior degeneracies" : "nullity at " + at;
  }

  auto& checks = report.distribution_checks;

  {
    DistributionCheck c{"index_difference_bound", true, true, ""};
    for (size_t i = 0; i < sc.sigma_grid.size(); ++i) {
      const int d = sc.mu[i] - sc.mu0[i];
      if (d < 0 || d > 1) {
        c.pass = false;
        c.detail = "violated at sigma=" + format_t(sc.sigma_grid[i]);
        break;
      }
    }
    checks.push_back(std::move(c));
  }
  {
    DistributionCheck c{"mu0_nondecreasing", true, true, ""};
    for (size_t i = 0; i + 1 < sc.sigma_grid.size(); ++i) {
      if (sc.mu0[i + 1] < sc.mu0[i]) {
        c.pass = false;
        c.detail = "decreases at sigma=" + format_t(sc.sigma_grid[i + 1]);
        break;
      }
    }
    checks.push_back(std::move(c));
  }
  {
    // Jump instants of mu0 and pseudo-focal instants coincide within one
    // grid cell, in both directions.
    DistributionCheck c{"mu0_jumps_match_pseudo_focal", true, true, ""};
    for (size_t i = 0; i + 1 < sc.sigma_grid.size(); ++i) {
      if (sc.mu0[i + 1] == sc.mu0[i]) continue;
      const double lo = sc.sigma_grid[i] - cell;
      const double hi = sc.sigma_grid[i + 1] + cell;
      bool matched = false;
      for (const auto& inst : sc.pseudo_focal.instants) {
        if (inst.t >= lo && inst.t <= hi) matched = true;
      }
      if (!matched) {
        c.pass = false;
        c.detail += "unmatched jump in (" + format_t(sc.sigma_grid[i]) + "," +
                    format_t(sc.sigma_grid[i + 1]) + "); ";
      }
    }
    for (const auto& inst : sc.pseudo_focal.instants) {
      if (inst.t <= kSigmaMin || inst.t >= 1.0 - 1e-9) continue;
      bool matched = false;
      for (size_t i = 0; i + 1 < sc.sigma_grid.size(); ++i) {
        if (sc.mu0[i + 1] != sc.mu0[i] && inst.t >= sc.sigma_grid[i] - cell &&
            inst.t <= sc.sigma_grid[i + 1] + cell) {
          matched = true;
        }
      }
      if (!matched) {
        c.pass = false;
        c.detail += "no jump near pseudo-focal t=" + format_t(inst.t) + "; ";
      }
    }
    checks.push_back(std::move(c));
  }
  {
    DistributionCheck c{"focal_multiplicity_bound", !sc.focal.instants.empty(), true, ""};
    for (const auto& inst : sc.focal.instants) {
      const int mul0 = multiplicity_at(sc.pseudo_focal, inst.t);
      if (mul0 < inst.multiplicity - 1) {
        c.pass = false;
        c.detail += "mul0 < mul-1 at t=" + format_t(inst.t) + "; ";
      }
    }
    checks.push_back(std::move(c));
  }
  {
    DistributionCheck c{"pseudo_multiplicity_bound", !sc.pseudo_focal.instants.empty(), true, ""};
    for (const auto& inst : sc.pseudo_focal.instants) {
      const int mul = multiplicity_at(sc.focal, inst.t);
      if (mul < inst.multiplicity - 1) {
        c.pass = false;
        c.detail += "mul < mul0-1 at t=" + format_t(inst.t) + "; ";
      }
    }
    checks.push_back(std::move(c));
  }
  {
    // Between consecutive pseudo-focal instants below 1 the affine-space
    // index must jump somewhere in the bracket.
    DistributionCheck c{"mu_jump_between_pseudo_focal", false, true, ""};
    std::vector<double> interior;
    for (const auto& inst : sc.pseudo_focal.instants) {
      if (inst.t < 1.0 - 1e-9) interior.push_back(inst.t);
    }
    if (interior.size() >= 2) {
      c.applicable = true;
      for (size_t k = 0; k + 1 < interior.size(); ++k) {
        const double lo = interior[k] - cell;
        const double hi = interior[k + 1] + cell;
        bool jumped = false;
        for (size_t i = 0; i + 1 < sc.sigma_grid.size(); ++i) {
          if (sc.sigma_grid[i] >= lo && sc.sigma_grid[i + 1] <= hi &&
              sc.mu[i + 1] != sc.mu[i]) {
            jumped = true;
          }
        }
        if (!jumped) {
          c.pass = false;
          c.detail += "no mu jump in [" + format_t(interior[k]) + "," +
                      format_t(interior[k + 1]) + "]; ";
        }
      }
    }
    checks.push_back(std::move(c));
  }
  {
    // A positive jump of mu at or before the first pseudo-focal instant;
    // checkable on the grid only when mu starts at zero.
    DistributionCheck c{"mu_jump_before_first_pseudo", false, true, ""};
    if (!sc.pseudo_focal.instants.empty() && sc.mu[0] == 0) {
      c.applicable = true;
      const double t0 = sc.pseudo_focal.instants.front().t;
      bool positive = false;
      for (size_t i = 0; i < sc.sigma_grid.size() && sc.sigma_grid[i] <= t0 + cell; ++i) {
        if (sc.mu[i] > 0) positive = true;
      }
      c.pass = positive;
      if (!positive) c.detail = "mu stays 0 up to the first pseudo-focal instant";
    } else if (!sc.pseudo_focal.instants.empty()) {
      c.detail = "mu already positive at sigma_min; jump predates the scan";
    }
    checks.push_back(std::move(c));
  }
  {
    // Observations only; the underlying monotonicity and isolation
    // questions are open, so these never fail the report.
    DistributionCheck c{"mu_nondecreasing_observed", false, true, ""};
    bool monotone = true;
    for (size_t i = 0; i + 1 < sc.sigma_grid.size(); ++i) {
      if (sc.mu[i + 1] < sc.mu[i]) monotone = false;
    }
    c.detail = monotone ? "mu nondecreasing on this grid" : "mu decreases on this grid";
    checks.push_back(std::move(c));
  }
  {
    DistributionCheck c{"non_effective_focal_observed", false, true, ""};
    std::string list;
    for (const auto& inst : sc.focal.instants) {
      bool jumped = false;
      for (size_t i = 0; i + 1 < sc.sigma_grid.size(); ++i) {
        if (sc.mu[i + 1] != sc.mu[i] && inst.t >= sc.sigma_grid[i] - cell &&
            inst.t <= sc.sigma_grid[i + 1] + cell) {
          jumped = true;
        }
      }
      if (!jumped) list += (list.empty() ? "" : ", ") + format_t(inst.t);
    }
    c.detail = list.empty() ? "every focal instant has a nearby mu jump"
                            : "focal instants without a nearby mu jump: " + list;
    checks.push_back(std::move(c));
  }

  return report;
}

}  // namespace msturm
