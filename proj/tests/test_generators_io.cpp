#include "msturm/generators.hpp"
#include "msturm/io.hpp"

#include "msturm/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace msturm;

TEST_CASE("generators validate") {
  CHECK(validate(flat_problem(3)).ok);
  CHECK(validate(flat_problem(4, FlatPChoice::spacelike_hyperplane)).ok);
  CHECK(validate(static_constant_curvature_problem(5.0)).ok);
  CHECK(validate(static_constant_curvature_problem(5.0, true)).ok);
  CHECK(validate(flat_admissible_problem()).ok);
}

TEST_CASE("static generator is singular with the expected data") {
  MorseSturmProblem p = static_constant_curvature_problem(std::pow(1.5 * M_PI, 2));
  const ValidationReport report = validate(p);
  CHECK(report.regime == Regime::singular);
  CHECK(report.y0_orthogonal_to_P);
  CHECK(p.R().eval(0.3)(2, 2) == doctest::Approx(-std::pow(1.5 * M_PI, 2)));
}

TEST_CASE("random problems are deterministic in the seed") {
  MorseSturmProblem a = random_problem(11);
  MorseSturmProblem b = random_problem(11);
  CHECK(problem_to_json(a).dump() == problem_to_json(b).dump());
  MorseSturmProblem c = random_problem(12);
  CHECK(problem_to_json(a).dump() != problem_to_json(c).dump());
}

TEST_CASE("random problems validate and respect the norm bound") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    MorseSturmProblem p = random_problem(seed);
    const ValidationReport report = validate(p);
    CHECK_MESSAGE(report.ok, "seed ", seed);
    double max_R = 0.0;
    double worst_timelike = -1e9;
    for (int i = 0; i <= 64; ++i) {
      const double t = i / 64.0;
      max_R = std::max(max_R, p.R().eval(t).norm());
      const Vector y = p.Y().eval_vec(t);
      worst_timelike = std::max(worst_timelike, p.g().inner(y, y));
    }
    CHECK(max_R <= 20.0 + 1e-9);
    CHECK(worst_timelike <= -0.05 + 1e-6);
  }
}

TEST_CASE("problem files round-trip") {
  for (MorseSturmProblem p :
       {flat_problem(3), static_constant_curvature_problem(7.5, true), random_problem(3)}) {
    const nlohmann::json j = problem_to_json(p);
    MorseSturmProblem q = problem_from_json(j);
    CHECK(problem_to_json(q).dump() == j.dump());
  }
}

TEST_CASE("schema violations throw SchemaError") {
  nlohmann::json good = problem_to_json(flat_problem(2));

  SUBCASE("missing key") {
    nlohmann::json j = good;
    j.erase("Y");
    CHECK_THROWS_AS(problem_from_json(j), SchemaError);
  }
  SUBCASE("wrong metric signature") {
    nlohmann::json j = good;
    j["g"] = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(problem_from_json(j), SchemaError);
  }
  SUBCASE("bad curve kind") {
    nlohmann::json j = good;
    j["R"]["kind"] = "fourier";
    CHECK_THROWS_AS(problem_from_json(j), SchemaError);
  }
  SUBCASE("dependent basis vectors") {
    nlohmann::json j = good;
    j["P"] = {{0.0, 1.0}, {0.0, 2.0}};
    CHECK_THROWS_AS(problem_from_json(j), SchemaError);
  }
  SUBCASE("not an object") { CHECK_THROWS_AS(problem_from_json(nlohmann::json::array()), SchemaError); }
}

TEST_CASE("scan CSV format") {
  IndexScan sc;
  sc.sigma_grid = {0.01, 0.5, 1.0};
  sc.mu = {0, 1, 1};
  sc.mu0 = {0, 0, 1};
  sc.nullity0 = {0, 0, 0};
  CHECK(scan_to_csv(sc) == "sigma,mu,mu0,nullity0\n0.01,0,0,0\n0.5,1,0,0\n1,1,1,0\n");
}

TEST_CASE("riemannian reduction rejects unsupported problems") {
  CHECK_THROWS_AS(riemannian_reduced_index(flat_admissible_problem(), 32),
                  std::invalid_argument);
}
