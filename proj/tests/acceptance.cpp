// Acceptance suite: oracle- and property-based checks over the closed-form
// generators and a seeded random ensemble. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.

#include "msturm/generators.hpp"
#include "msturm/index_form.hpp"
#include "msturm/io.hpp"
#include "msturm/pseudo.hpp"
#include "msturm/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace msturm;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {
    start_ = std::chrono::steady_clock::now();
  }

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      details_ += (details_.empty() ? "" : "; ") + what;
    }
  }

  void require_runtime_below(double seconds) {
    budget_ = seconds;
  }

  ~Criterion() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (budget_ > 0.0 && elapsed > budget_) {
      pass_ = false;
      details_ += (details_.empty() ? "" : "; ") + std::string("runtime ") +
                  std::to_string(elapsed) + "s exceeds " + std::to_string(budget_) + "s";
    }
    std::printf("[%s] %s (%.1fs)%s%s\n", pass_ ? "PASS" : "FAIL", name_.c_str(), elapsed,
                details_.empty() ? "" : " -- ", details_.c_str());
    std::fflush(stdout);
    if (!pass_) ++g_failures;
  }

 private:
  std::string name_;
  std::string details_;
  bool pass_ = true;
  double budget_ = 0.0;
  std::chrono::steady_clock::time_point start_;
};

const double kSphere32 = std::pow(1.5 * M_PI, 2);   // focal instant at 2/3
const double kSphere54 = std::pow(1.25 * M_PI, 2);  // focal instant at 4/5

// max |C_V(t) - C_V(0)| <= 1e-8 (1 + max|V| max|Y|) for a stored solution.
bool conservation_ok(const MorseSturmProblem& p, const FieldSolution& sol,
                     std::string* why) {
  double max_v = 0.0;
  for (const Vector& v : sol.values) max_v = std::max(max_v, v.norm());
  const double max_y = p.Y().max_norm();
  const double budget = 1e-8 * (1.0 + max_v * max_y);
  if (sol.max_constraint_drift > budget) {
    *why = "constraint drift " + std::to_string(sol.max_constraint_drift) + " > " +
           std::to_string(budget);
    return false;
  }
  return true;
}

void criterion_1_flat_sanity() {
  Criterion c("criterion 1: flat sanity");
  c.require_runtime_below(5.0);
  MorseSturmProblem p = flat_problem(3);
  c.require(focal_instants(p).instants.empty(), "focal report not empty");
  c.require(pseudo_focal_instants(p).instants.empty(), "pseudo-focal report not empty");
  for (double sigma : {0.25, 0.5, 1.0}) {
    for (SpaceKind kind : {SpaceKind::h0, SpaceKind::hstar}) {
      const IndexResult res = index_and_nullity(p, sigma, 64, kind);
      c.require(res.n_minus == 0 && res.nullity == 0,
                "nonzero index or nullity at sigma=" + std::to_string(sigma));
    }
  }
}

void criterion_2_static_sphere() {
  Criterion c("criterion 2: static sphere index theorem and riemannian reduction");
  c.require_runtime_below(30.0);
  MorseSturmProblem p = static_constant_curvature_problem(kSphere32);

  const FocalReport focal = focal_instants(p);
  c.require(focal.instants.size() == 1, "expected exactly one focal instant");
  if (!focal.instants.empty()) {
    c.require(std::abs(focal.instants[0].t - 2.0 / 3.0) <= 1e-6, "focal instant off 2/3");
    c.require(focal.instants[0].multiplicity == 1, "focal multiplicity != 1");
  }

  const FocalReport pseudo = pseudo_focal_instants(p);
  c.require(pseudo.instants.size() == focal.instants.size(), "pseudo report size differs");
  for (size_t i = 0; i < std::min(pseudo.instants.size(), focal.instants.size()); ++i) {
    c.require(std::abs(pseudo.instants[i].t - focal.instants[i].t) <= 1e-6 &&
                  pseudo.instants[i].multiplicity == focal.instants[i].multiplicity,
              "pseudo-focal report differs from focal report");
  }

  const IndexResult idx = index_and_nullity(p, 1.0, 128, SpaceKind::h0);
  c.require(idx.n_minus == 1 && idx.nullity == 0, "mu0(1) != 1 or nonzero nullity");
  c.require(epsilon_invariant(p, 128) == 0, "epsilon invariant nonzero");
  c.require(riemannian_reduced_index(p, 128) ==
                index_and_nullity(p, 1.0, 128, SpaceKind::hstar).n_minus,
            "riemannian-reduced index differs");
}

void criterion_3_two_endpoint() {
  Criterion c("criterion 3: two-endpoint decomposition");
  {
    MorseSturmProblem p = static_constant_curvature_problem(kSphere54, true);
    const TwoEndpointResult res = two_endpoint_index(p, 128);
    c.require(res.decomposition_valid, "hypothesis J[1] contains Q fails");
    c.require(res.correction == Inertia{0, 0, 1}, "correction inertia != (0,0,1)");
    const int mu0_1 = index_and_nullity(p, 1.0, 128, SpaceKind::h0).n_minus;
    c.require(res.total.n_minus == 1 && res.total.n_minus == mu0_1 + res.correction.n_minus,
              "total != 1 + 0");
  }
  {
    MorseSturmProblem p = static_constant_curvature_problem(kSphere32, true);
    const TwoEndpointResult res = two_endpoint_index(p, 128);
    c.require(res.decomposition_valid, "degenerate variant: hypothesis fails");
    c.require(res.correction == Inertia{0, 1, 0},
              "degenerate variant: correction inertia != (0,1,0)");
    c.require(res.total.n_minus == 1, "degenerate variant: total != 1");
  }
}

void criterion_4_admissible_flat() {
  Criterion c("criterion 4: admissible flat example");
  MorseSturmProblem p = flat_admissible_problem();
  c.require(classify_Y(p).kind == YKind::admissible, "classification != admissible");
  c.require(pseudo_focal_instants(p).instants.empty(), "pseudo-focal report not empty");
  const IndexResult idx = index_and_nullity(p, 1.0, 64, SpaceKind::h0);
  c.require(idx.n_minus == 0, "mu0(1) != 0");
  const VerificationReport report = verify(p, 25, 64);
  c.require(report.index_theorem.pass && report.index_theorem.lhs == 0 &&
                report.index_theorem.rhs == 0,
            "index theorem 0 = 0 fails");
}

void criterion_5_conservation() {
  Criterion c("criterion 5: conservation invariants");
  std::string why;
  const std::vector<MorseSturmProblem> problems = {
      flat_problem(3), static_constant_curvature_problem(kSphere32),
      static_constant_curvature_problem(kSphere54, true), flat_admissible_problem()};
  for (const MorseSturmProblem& p : problems) {
    for (const FieldSolution& sol : p_jacobi_basis(p, 1.0)) {
      c.require(conservation_ok(p, sol, &why), "jacobi basis: " + why);
    }
    for (const PseudoField& f : pseudo_basis(p, 1.0)) {
      c.require(conservation_ok(p, f.solution, &why), "pseudo basis: " + why);
    }
    // g(m(Y), Y) = 0 on the validation grid.
    double max_y = p.Y().max_norm();
    for (int i = 0; i < 257; ++i) {
      const double t = i / 256.0;
      const Vector m = m_of_Y(p, t);
      const Vector y = p.Y().eval_vec(t);
      const double scale = 1.0 + m.norm() * max_y;
      c.require(std::abs(p.g().inner(m, y)) <= 1e-10 * scale, "g(m(Y),Y) too large");
    }
  }
}

void criterion_6_random_cross_validation() {
  Criterion c("criterion 6: random cross-validation");
  c.require_runtime_below(300.0);
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const MorseSturmProblem p = random_problem(seed, 2, 20.0);
    const ValidationReport report = validate(p);
    if (!report.ok || report.regime == Regime::none) continue;
    const IndexResult idx = index_and_nullity(p, 1.0, 256, SpaceKind::h0);
    if (idx.nullity != 0) continue;  // sigma = 1 is itself degenerate
    const int count = pseudo_focal_instants(p).total_multiplicity(1.0 - 1e-9);
    ++checked;
    c.require(idx.n_minus == count,
              "seed " + std::to_string(seed) + ": mu0(1)=" + std::to_string(idx.n_minus) +
                  " vs pseudo-focal count " + std::to_string(count));
  }
  c.require(checked >= 15, "too few usable random instances: " + std::to_string(checked));
}

void criterion_7_distribution_properties() {
  Criterion c("criterion 7: distribution property suite");
  auto check_scan = [&](const MorseSturmProblem& p, const std::string& label, int N) {
    const VerificationReport report = verify(p, 50, N);
    const IndexScan& sc = report.scan;
    for (size_t i = 0; i < sc.sigma_grid.size(); ++i) {
      const int d = sc.mu[i] - sc.mu0[i];
      c.require(d >= 0 && d <= 1, label + ": mu - mu0 outside [0,1]");
      if (i > 0) c.require(sc.mu0[i] >= sc.mu0[i - 1], label + ": mu0 decreases");
    }
    c.require(report.jump_sum.pass,
              label + ": jump-sum " + std::to_string(report.jump_sum.lhs) +
                  " != " + std::to_string(report.jump_sum.rhs));
    for (const auto& check : report.distribution_checks) {
      if (check.applicable) {
        c.require(check.pass, label + ": " + check.id + " -- " + check.detail);
      }
    }
  };
  check_scan(static_constant_curvature_problem(kSphere32), "sphere", 128);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const MorseSturmProblem p = random_problem(seed, 2, 20.0);
    const ValidationReport report = validate(p);
    if (!report.ok || report.regime == Regime::none) continue;
    check_scan(p, "seed " + std::to_string(seed), 128);
  }
}

void criterion_8_mesh_convergence() {
  Criterion c("criterion 8: mesh convergence");
  MorseSturmProblem p = static_constant_curvature_problem(kSphere32);
  const IndexResult a128 = index_and_nullity(p, 1.0, 128, SpaceKind::h0);
  const IndexResult a256 = index_and_nullity(p, 1.0, 256, SpaceKind::h0);
  c.require(a128.n_minus == a256.n_minus && a128.nullity == a256.nullity,
            "index result changes between N=128 and N=256");
  const IndexResult d128 = index_and_nullity(p, 2.0 / 3.0, 128, SpaceKind::h0);
  const IndexResult d256 = index_and_nullity(p, 2.0 / 3.0, 256, SpaceKind::h0);
  c.require(d256.smallest_abs_eigenvalue <= 0.5 * d128.smallest_abs_eigenvalue,
            "kernel eigenvalue shrinks by less than 2x");
}

}  // namespace

int main() {
  criterion_1_flat_sanity();
  criterion_2_static_sphere();
  criterion_3_two_endpoint();
  criterion_4_admissible_flat();
  criterion_5_conservation();
  criterion_6_random_cross_validation();
  criterion_7_distribution_properties();
  criterion_8_mesh_convergence();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
