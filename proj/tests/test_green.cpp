#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "disklab/green.hpp"
#include "disklab/poisson.hpp"
#include "disklab/rng.hpp"
#include "doctest.h"

using namespace disklab;

TEST_CASE("symmetric, negative, zero at the rim") {
  Rng rng(7, "green-pairs");
  for (int k = 0; k < 200; ++k) {
    Vec2 x, y;
    rng.in_disk(x.x, x.y);
    do {
      rng.in_disk(y.x, y.y);
    } while ((x - y).norm() < 1e-3);
    const double gxy = green_function(x, y);
    const double gyx = green_function(y, x);
    CHECK(gxy == doctest::Approx(gyx).epsilon(1e-10));
    CHECK(gxy < 0.0);
  }
  // approach the rim along a ray: the value dies
  const Vec2 y{0.3, -0.2};
  CHECK(std::abs(green_function({0.999, 0.0}, y)) < 5e-4);
}

TEST_CASE("origin reduces to the free logarithm") {
  const Vec2 y{0.4, 0.1};
  const double expect = std::log(y.norm()) / (2.0 * 3.14159265358979323846);
  CHECK(green_function({0.0, 0.0}, y) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("coincident points are refused") {
  CHECK_THROWS_AS(green_function({0.2, 0.2}, {0.2, 0.2}), std::invalid_argument);
}

TEST_CASE("superposition reproduces the constant-source solution") {
  // psi(x) = integral G(x,y) dy = (|x|^2 - 1)/4
  DiskGrid g(65);
  ScalarField one(g, 1.0);
  for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.5, 0.1}, Vec2{-0.3, -0.6}}) {
    const double got = green_superposition(one, x);
    const double expect = (x.norm2() - 1.0) / 4.0;
    CHECK(std::abs(got - expect) < 5e-3);
  }
}

TEST_CASE("superposition agrees with the grid solver on a bump source") {
  DiskGrid g(65);
  ScalarField rhs = ScalarField::sample(g, [](Vec2 p) {
    const double q = 1.0 - p.norm2() / 0.25;
    return q > 0.0 ? q * q : 0.0;
  });
  ScalarField psi = solve_dirichlet(rhs);
  for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.25, 0.25}, Vec2{-0.5, 0.125}}) {
    const int i = static_cast<int>(std::lround((x.x + 1.0) / g.spacing()));
    const int j = static_cast<int>(std::lround((x.y + 1.0) / g.spacing()));
    const double got = green_superposition(rhs, g.node(i, j));
    CHECK(std::abs(got - psi(i, j)) < 5e-3);
  }
}
