#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "uhlab/quadrature.hpp"

using namespace uhlab;

TEST_CASE("gauss-kronrod handles smooth and endpoint-singular integrands") {
  CHECK(integrate([](double t) { return std::sin(t); }, 0.0, 3.141592653589793)
        == doctest::Approx(2.0).epsilon(1e-12));
  // integrable endpoint singularity t^{-0.2}: exact 1/0.8
  CHECK(integrate([](double t) { return std::pow(t, -0.2); }, 0.0, 1.0)
        == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(integrate([](double t) { return std::log(t); }, 0.0, 1.0)
        == doctest::Approx(-1.0).epsilon(1e-9));
  // orientation
  CHECK(integrate([](double t) { return t; }, 1.0, 0.0)
        == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(integrate([](double t) { return t; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("monotone inversion by doubling bracket + bisection") {
  auto cube = [](double t) { return t * t * t; };
  CHECK(invert_increasing(cube, 8.0) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(invert_increasing(cube, 1e-9) == doctest::Approx(1e-3).epsilon(1e-10));
  CHECK(invert_increasing(cube, 0.0) == 0.0);
  CHECK_THROWS_AS(invert_increasing(cube, -1.0), std::domain_error);
}

TEST_CASE("golden section locates a unimodal maximum") {
  auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
  CHECK(golden_section_max(f, -2.0, 5.0) == doctest::Approx(0.3).epsilon(1e-7));
}
