#include "msturm/curve.hpp"

#include "msturm/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace msturm;

TEST_CASE("constant and polynomial curves evaluate exactly") {
  CurveSpec c = CurveSpec::constant(2.0 * Matrix::Identity(2, 2));
  CHECK(c.eval(0.3)(0, 0) == doctest::Approx(2.0));
  CHECK(c.deriv(0.3).norm() == doctest::Approx(0.0));

  // 1 - t + 3 t^2 entrywise on a 1-vector.
  std::vector<Matrix> coeffs{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, -1.0),
                             Matrix::Constant(1, 1, 3.0)};
  CurveSpec p = CurveSpec::polynomial(coeffs);
  CHECK(p.eval(0.5)(0, 0) == doctest::Approx(1.0 - 0.5 + 0.75));
  CHECK(p.deriv(0.5)(0, 0) == doctest::Approx(-1.0 + 3.0));
  CHECK(p.second_deriv(0.9)(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("sampled curves reproduce smooth functions") {
  const int M = 129;
  std::vector<Matrix> samples;
  for (int i = 0; i < M; ++i) {
    const double t = static_cast<double>(i) / (M - 1);
    samples.push_back(Matrix::Constant(1, 1, std::sin(3.0 * t)));
  }
  CurveSpec s = CurveSpec::sampled(samples);
  for (double t : {0.05, 0.3141, 0.5, 0.77, 0.99}) {
    CHECK(s.eval(t)(0, 0) == doctest::Approx(std::sin(3.0 * t)).epsilon(1e-7));
    CHECK(s.deriv(t)(0, 0) == doctest::Approx(3.0 * std::cos(3.0 * t)).epsilon(1e-4));
    CHECK(s.second_deriv(t)(0, 0) == doctest::Approx(-9.0 * std::sin(3.0 * t)).epsilon(1e-2));
  }
}

TEST_CASE("sampled grids need 33 nodes and cubics are exact") {
  std::vector<Matrix> too_few(32, Matrix::Zero(1, 1));
  CHECK_THROWS_AS(CurveSpec::sampled(too_few), SchemaError);

  // A cubic is reproduced exactly by the not-a-knot spline.
  const int M = 41;
  std::vector<Matrix> samples;
  for (int i = 0; i < M; ++i) {
    const double t = static_cast<double>(i) / (M - 1);
    samples.push_back(Matrix::Constant(1, 1, 1.0 + t + t * t - 2.0 * t * t * t));
  }
  CurveSpec s = CurveSpec::sampled(samples);
  for (double t : {0.013, 0.5, 0.987}) {
    CHECK(s.eval(t)(0, 0) ==
          doctest::Approx(1.0 + t + t * t - 2.0 * t * t * t).epsilon(1e-12));
    CHECK(s.deriv(t)(0, 0) == doctest::Approx(1.0 + 2.0 * t - 6.0 * t * t).epsilon(1e-10));
    CHECK(s.second_deriv(t)(0, 0) == doctest::Approx(2.0 - 12.0 * t).epsilon(1e-8));
  }
}

TEST_CASE("evaluation outside [0,1] is rejected") {
  CurveSpec c = CurveSpec::constant(Matrix::Identity(2, 2));
  CHECK_THROWS_AS(c.eval(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(c.eval(1.5), std::invalid_argument);
  CHECK_NOTHROW(c.eval(1.0 + 1e-12));  // roundoff slack
}
