#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "disklab/calculus.hpp"
#include "disklab/poisson.hpp"
#include "doctest.h"

using namespace disklab;

// Laplacian psi = 1, zero trace  =>  psi = (r^2 - 1)/4.
TEST_CASE("constant source closed form") {
  DiskGrid g(65);
  ScalarField rhs(g, 1.0);
  ScalarField psi = solve_dirichlet(rhs);
  double worst = 0.0;
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / g.n(), idx % g.n());
    worst = std::max(worst, std::abs(psi[idx] - (p.norm2() - 1.0) / 4.0));
  }
  CHECK(worst < 5.0 * g.spacing() * g.spacing());
}

TEST_CASE("manufactured dirichlet solution, quadratic convergence") {
  // psi = (1 - r^2) sin(x): Laplacian = -4 sin(x) - 4x cos(x) - (1-r^2) sin(x).
  auto exact = [](Vec2 p) { return (1.0 - p.norm2()) * std::sin(p.x); };
  auto source = [](Vec2 p) {
    return -4.0 * std::sin(p.x) - 4.0 * p.x * std::cos(p.x) - (1.0 - p.norm2()) * std::sin(p.x);
  };
  auto err_at = [&](int n) {
    DiskGrid g(n);
    ScalarField rhs = ScalarField::sample(g, source);
    ScalarField psi = solve_dirichlet(rhs);
    double worst = 0.0;
    for (int idx : g.interior()) {
      const Vec2 p = g.node(idx / g.n(), idx % g.n());
      worst = std::max(worst, std::abs(psi[idx] - exact(p)));
    }
    return worst;
  };
  const double e33 = err_at(33), e65 = err_at(65);
  CHECK(e33 < 0.01);
  CHECK(e33 / e65 > 2.5);  // boundary-band interpolation costs a little of the 4
}

TEST_CASE("nonzero trace is honoured") {
  DiskGrid g(33);
  // harmonic polynomial x^2 - y^2 with its own boundary values: zero source
  ScalarField zero(g);
  ScalarField tr = ScalarField::sample(g, [](Vec2 p) { return p.x * p.x - p.y * p.y; });
  ScalarField psi = solve_dirichlet(zero, &tr);
  double worst = 0.0;
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / g.n(), idx % g.n());
    worst = std::max(worst, std::abs(psi[idx] - (p.x * p.x - p.y * p.y)));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("neumann solve returns a zero-mean solution of the corrected problem") {
  DiskGrid g(33);
  ScalarField rhs = ScalarField::sample(g, [](Vec2 p) { return p.x; });  // already mean-free
  PoissonProblem prob;
  prob.rhs = &rhs;
  prob.bc = BcKind::Neumann;
  PoissonResult r = solve_poisson(prob);
  CHECK(std::abs(r.mean_removed) < 1e-10);
  CHECK(std::abs(integrate(r.u)) < 1e-8);
  CHECK(r.rel_residual < 1e-8);

  // a non-compatible source gets its quadrature mean subtracted
  ScalarField bad(g, 1.0);
  prob.rhs = &bad;
  PoissonResult r2 = solve_poisson(prob);
  CHECK(r2.mean_removed == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("interior five-point residual of the returned solution") {
  DiskGrid g(33);
  ScalarField rhs = ScalarField::sample(g, [](Vec2 p) { return std::cos(3.0 * p.x) * p.y; });
  ScalarField psi = solve_dirichlet(rhs);
  ScalarField back = laplacian(psi);
  double num = 0.0, den = 0.0;
  for (int idx : g.interior()) {
    num += (back[idx] - rhs[idx]) * (back[idx] - rhs[idx]);
    den += rhs[idx] * rhs[idx];
  }
  CHECK(std::sqrt(num / den) < 1e-7);
}

TEST_CASE("warm start converges to the same answer") {
  DiskGrid g(33);
  ScalarField rhs = ScalarField::sample(g, [](Vec2 p) { return p.x * p.y; });
  ScalarField cold = solve_dirichlet(rhs);
  ScalarField guess = ScalarField::sample(g, [](Vec2 p) { return 0.3 * p.x; });
  ScalarField warm = solve_dirichlet(rhs, nullptr, &guess);
  for (int idx : g.interior()) CHECK(warm[idx] == doctest::Approx(cold[idx]).epsilon(1e-6));
}
