#include "msturm/problem.hpp"

#include "msturm/errors.hpp"
#include "msturm/generators.hpp"
#include "msturm/jacobi.hpp"

#include <doctest.h>

#include <cmath>

using namespace msturm;

namespace {

Matrix minkowski(int n) {
  Matrix g = Matrix::Identity(n, n);
  g(0, 0) = -1.0;
  return g;
}

}  // namespace

TEST_CASE("m(Y) for the flat admissible field") {
  MorseSturmProblem p = flat_admissible_problem();

  const Vector m0 = m_of_Y(p, 0.0);
  CHECK(m0(0) == doctest::Approx(0.0));
  CHECK(m0(1) == doctest::Approx(-1.0));

  // Hand evaluation at t = 1: g(Y,Y) = -3/4, g(Y,Y') = 1/4.
  const Vector m1 = m_of_Y(p, 1.0);
  Vector expected(2);
  expected << 2.0 * 0.0 / (-0.75) - 2.0 * 1.0 * 0.25 / 0.5625,
      2.0 * 0.5 / (-0.75) - 2.0 * 0.5 * 0.25 / 0.5625;
  CHECK(m1(0) == doctest::Approx(expected(0)));
  CHECK(m1(1) == doctest::Approx(expected(1)));
}

TEST_CASE("m(Y) vanishes identically for constant Y") {
  MorseSturmProblem p = flat_problem(3);
  for (double t : {0.0, 0.25, 0.9}) {
    CHECK(m_of_Y(p, t).norm() == doctest::Approx(0.0));
  }
  CHECK(classify_Y(p).kind == YKind::singular);
}

TEST_CASE("classification of the admissible example") {
  MorseSturmProblem p = flat_admissible_problem();
  const YClassification c = classify_Y(p);
  CHECK(c.kind == YKind::admissible);
  CHECK(c.m_at_zero_norm == doctest::Approx(1.0));
}

TEST_CASE("classification is scale invariant") {
  MorseSturmProblem p = flat_admissible_problem();
  std::vector<Matrix> scaled;
  for (const Matrix& c : p.Y().payload()) scaled.push_back(3.0 * c);
  MorseSturmProblem q = p.with_Y(CurveSpec::polynomial(scaled));
  CHECK(classify_Y(q).kind == classify_Y(p).kind);
}

TEST_CASE("generic classification: dependent at 0, independent later") {
  // Y'' = R Y with Y(0) = e0, Y'(0) = 0 and an off-diagonal g-symmetric R
  // gives a field whose derivative grows into an independent direction.
  const int n = 2;
  Matrix Rm(2, 2);
  Rm << 0.2, 0.5, -0.5, 0.1;  // g R symmetric for g = diag(-1,1)
  MetricForm g(minkowski(n));
  CurveSpec R = CurveSpec::constant(Rm);

  Tolerances tol;
  MorseSturmProblem carrier(MetricForm(minkowski(n)), R, CurveSpec::constant(Vector::Unit(n, 0)),
                            SubspaceBasis::zero(n), Matrix(0, 0), std::nullopt, std::nullopt,
                            tol);
  const FieldSolution ysol =
      integrate_field(carrier, Vector::Unit(n, 0), Vector::Zero(n), nullptr, 1.0);
  std::vector<Matrix> samples(ysol.values.begin(), ysol.values.end());
  MorseSturmProblem p(MetricForm(minkowski(n)), R, CurveSpec::sampled(samples),
                      SubspaceBasis::zero(n), Matrix(0, 0));

  const ValidationReport report = validate(p);
  CHECK(report.ok);
  CHECK(report.classification.kind == YKind::generic);
  CHECK(report.regime == Regime::none);
  CHECK_THROWS_AS(require_valid_regime(p), RegimeError);
}

TEST_CASE("perturbation to an admissible field") {
  MorseSturmProblem p = flat_problem(2);
  const Vector e = Vector::Unit(2, 1);

  SUBCASE("singular Y becomes admissible") {
    SearchRange range{-0.5, 0.5, 5};
    const PerturbationResult res = perturb_to_admissible(p, e, range, range);
    CHECK(res.a == doctest::Approx(0.0));
    CHECK(res.b == doctest::Approx(0.25));
    const ValidationReport report = validate(res.problem);
    CHECK(report.ok);
    CHECK(report.regime == Regime::admissible);
    // Y-bar = (1, t/4) is timelike: g(Y,Y) = -1 + t^2/16 < 0.
    const Vector y1 = res.problem.Y().eval_vec(1.0);
    CHECK(y1(1) == doctest::Approx(0.25));
  }

  SUBCASE("already admissible is a no-op") {
    MorseSturmProblem adm = flat_admissible_problem();
    const PerturbationResult res = perturb_to_admissible(adm, e);
    CHECK(res.a == 0.0);
    CHECK(res.b == 0.0);
  }

  SUBCASE("timelike direction is rejected") {
    CHECK_THROWS_AS(perturb_to_admissible(p, Vector::Unit(2, 0)), RegimeError);
  }

  SUBCASE("search exhaustion is reported") {
    SearchRange empty{0.0, 0.0, 1};
    CHECK_THROWS_AS(perturb_to_admissible(p, e, empty, empty), NumericsError);
  }
}

TEST_CASE("orthogonalization against a spacelike direction") {
  const Vector e = Vector::Unit(2, 1);

  SUBCASE("already orthogonal is unchanged") {
    MorseSturmProblem p = flat_problem(2);
    MorseSturmProblem q = orthogonalize_Y(p, e);
    CHECK((q.Y().eval_vec(0.5) - p.Y().eval_vec(0.5)).norm() == doctest::Approx(0.0));
  }

  SUBCASE("the e-component is removed") {
    MorseSturmProblem p = flat_admissible_problem();
    MorseSturmProblem q = orthogonalize_Y(p, e);
    for (double t : {0.0, 0.3, 1.0}) {
      CHECK(q.g().inner(q.Y().eval_vec(t), e) == doctest::Approx(0.0));
      CHECK(q.Y().eval_vec(t)(0) == doctest::Approx(1.0));
    }
  }

  SUBCASE("non-spacelike direction is rejected") {
    MorseSturmProblem p = flat_problem(2);
    CHECK_THROWS_AS(orthogonalize_Y(p, Vector::Unit(2, 0)), RegimeError);
  }

  SUBCASE("sampled Y stays orthogonal at every node") {
    MorseSturmProblem p = flat_problem(2);
    std::vector<Matrix> samples;
    const int M = 65;
    for (int i = 0; i < M; ++i) {
      const double t = static_cast<double>(i) / (M - 1);
      Vector y(2);
      y << 1.0, 0.3 * t + 1e-4 * std::sin(40.0 * t);
      samples.push_back(y);
    }
    MorseSturmProblem noisy = p.with_Y(CurveSpec::sampled(samples));
    MorseSturmProblem q = orthogonalize_Y(noisy, e);
    for (int i = 0; i < M; ++i) {
      const double t = static_cast<double>(i) / (M - 1);
      const Vector y = q.Y().eval_vec(t);
      CHECK(std::abs(q.g().inner(y, e)) <= 1e-12 * y.norm());
    }
  }
}

TEST_CASE("g(m(Y), Y) vanishes along the grid") {
  for (MorseSturmProblem p : {flat_admissible_problem()}) {
    for (int i = 0; i < 257; ++i) {
      const double t = static_cast<double>(i) / 256;
      const Vector m = m_of_Y(p, t);
      const Vector y = p.Y().eval_vec(t);
      CHECK(std::abs(p.g().inner(m, y)) <= 1e-12 * (1.0 + m.norm() * y.norm()));
    }
  }
}

TEST_CASE("validation failures are reported") {
  SUBCASE("degenerate P") {
    Vector light(2);
    light << 1, 1;
    MetricForm g(minkowski(2));
    MorseSturmProblem p(std::move(g), CurveSpec::constant(Matrix::Zero(2, 2)),
                        CurveSpec::constant(Vector::Unit(2, 0)),
                        SubspaceBasis(2, {light}), Matrix::Zero(1, 1));
    const ValidationReport report = validate(p);
    CHECK_FALSE(report.ok);
    REQUIRE_FALSE(report.failures.empty());
    CHECK(report.failures[0].find("P is g-degenerate") != std::string::npos);
  }

  SUBCASE("non-timelike Y") {
    MetricForm g(minkowski(2));
    MorseSturmProblem p(std::move(g), CurveSpec::constant(Matrix::Zero(2, 2)),
                        CurveSpec::constant(Vector::Unit(2, 1)), SubspaceBasis::zero(2),
                        Matrix(0, 0));
    const ValidationReport report = validate(p);
    CHECK_FALSE(report.ok);
  }

  SUBCASE("flat problem validates in the singular regime") {
    const ValidationReport report = validate(flat_problem(3));
    CHECK(report.ok);
    CHECK(report.regime == Regime::singular);
    CHECK(report.y0_orthogonal_to_P);
  }

  SUBCASE("admissible example with a vacuous orthogonality note") {
    const ValidationReport report = validate(flat_admissible_problem());
    CHECK(report.ok);
    CHECK(report.regime == Regime::admissible);
    REQUIRE_FALSE(report.notes.empty());
    CHECK(report.notes[0].find("vacuously") != std::string::npos);
  }
}
