#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "disklab/calculus.hpp"
#include "doctest.h"

using namespace disklab;

namespace {
constexpr double kPi = 3.14159265358979323846;

ScalarField sample(const DiskGrid& g, double (*f)(Vec2)) {
  return ScalarField::sample(g, [&](Vec2 p) { return f(p); });
}
}  // namespace

TEST_CASE("gradient is exact on affine functions everywhere") {
  // Both the centred and the one-sided stencils reproduce first-degree
  // polynomials exactly, so this holds on the rim band too.
  DiskGrid g(33);
  ScalarField f = sample(g, [](Vec2 p) { return 3.0 * p.x - 2.0 * p.y + 0.5; });
  VecField df = grad(f);
  for (int idx : g.interior()) {
    CHECK(df.at(idx).x == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(df.at(idx).y == doctest::Approx(-2.0).epsilon(1e-12));
  }
}

TEST_CASE("perp gradient is the rotated gradient") {
  DiskGrid g(33);
  ScalarField f = sample(g, [](Vec2 p) { return p.x * p.x + 0.3 * p.y; });
  VecField df = grad(f);
  VecField pf = perp_grad(f);
  for (int idx : g.interior()) {
    CHECK(pf.at(idx).x == doctest::Approx(-df.at(idx).y).epsilon(1e-12));
    CHECK(pf.at(idx).y == doctest::Approx(df.at(idx).x).epsilon(1e-12));
  }
}

TEST_CASE("divergence of a perp gradient vanishes at full-centred nodes") {
  DiskGrid g(33);
  const double h = g.spacing();
  ScalarField f = sample(g, [](Vec2 p) { return std::sin(2.0 * p.x) * p.y + p.y * p.y; });
  ScalarField dv = divergence(perp_grad(f));
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / g.n(), idx % g.n());
    if (1.0 - p.norm() < 3.0 * h) continue;  // rim rows may be one-sided
    CHECK(std::abs(dv[idx]) < 1e-11);
  }
}

TEST_CASE("curl of a gradient vanishes at full-centred nodes") {
  DiskGrid g(33);
  const double h = g.spacing();
  ScalarField f = sample(g, [](Vec2 p) { return std::cos(p.x + 2.0 * p.y); });
  ScalarField c = curl(grad(f));
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / g.n(), idx % g.n());
    if (1.0 - p.norm() < 3.0 * h) continue;
    CHECK(std::abs(c[idx]) < 1e-11);
  }
}

TEST_CASE("five-point laplacian is exact on quadratics") {
  DiskGrid g(33);
  ScalarField f = sample(g, [](Vec2 p) { return p.x * p.x - 3.0 * p.y * p.y + p.x * p.y; });
  ScalarField lf = laplacian(f);
  for (int idx : g.interior()) CHECK(lf[idx] == doctest::Approx(-4.0).epsilon(1e-9));
}

TEST_CASE("second-order convergence of the centred gradient") {
  auto err_at = [](int n) {
    DiskGrid g(n);
    ScalarField f = sample(g, [](Vec2 p) { return std::exp(p.x) * std::sin(p.y); });
    VecField df = grad(f);
    double worst = 0.0;
    for (int idx : g.interior()) {
      const Vec2 p = g.node(idx / g.n(), idx % g.n());
      if (1.0 - p.norm() < 0.2) continue;  // fixed region, centred stencils
      const double ex = std::exp(p.x) * std::sin(p.y);
      const double ey = std::exp(p.x) * std::cos(p.y);
      worst = std::max(worst, std::hypot(df.at(idx).x - ex, df.at(idx).y - ey));
    }
    return worst;
  };
  const double e33 = err_at(33), e65 = err_at(65);
  CHECK(e33 / e65 > 3.0);  // O(h^2) would give 4
}

TEST_CASE("deriv_stencil terms sum to zero weight") {
  // Any consistent first-derivative stencil annihilates constants.
  DiskGrid g(17);
  DerivTerm t[2];
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      if (!g.in_domain(i, j)) continue;
      for (int axis = 0; axis < 2; ++axis) {
        const int cnt = deriv_stencil(g, i, j, axis, t);
        double sum = 0.0;
        for (int k = 0; k < cnt; ++k) sum += t[k].c;
        if (cnt > 0) CHECK(std::abs(sum) < 1e-12);
      }
    }
}

TEST_CASE("integrate over the disk") {
  DiskGrid g(65);
  ScalarField one(g, 1.0);
  // exterior nodes hold values too; only domain weights may count
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (g.node_class(i, j) == NodeClass::Exterior) one(i, j) = 1e9;
  CHECK(std::abs(integrate(one) - kPi) < 4.0 * g.spacing());

  ScalarField r2 = sample(g, [](Vec2 p) { return p.norm2(); });
  CHECK(std::abs(integrate(r2) - kPi / 2.0) < 4.0 * g.spacing());
}

TEST_CASE("norms agree with hand sums") {
  DiskGrid g(17);
  ScalarField f(g);
  for (int idx : g.interior()) f[idx] = 2.0;
  for (int idx : g.boundary()) f[idx] = -1.0;
  const double h2 = g.spacing() * g.spacing();
  const double expect_l1 = 2.0 * h2 * g.interior_count() + 1.0 * h2 / 2 * g.boundary_count();
  const double expect_l2 =
      std::sqrt(4.0 * h2 * g.interior_count() + 1.0 * h2 / 2 * g.boundary_count());
  CHECK(l1_norm(f) == doctest::Approx(expect_l1).epsilon(1e-12));
  CHECK(l2_norm(f) == doctest::Approx(expect_l2).epsilon(1e-12));
  CHECK(linf_norm(f) == doctest::Approx(2.0));
}

TEST_CASE("dirichlet energy of the identity chart") {
  // u(x) = (x1, x2): |grad u|^2 = 2, energy = pi.
  DiskGrid g(65);
  MapField u(g, 2);
  u.component(0) = sample(g, [](Vec2 p) { return p.x; });
  u.component(1) = sample(g, [](Vec2 p) { return p.y; });
  CHECK(std::abs(dirichlet_energy(u) - kPi) < 5.0 * g.spacing());
  ScalarField gn = grad_norm2(u);
  const int mid = g.n() / 2;
  CHECK(gn(mid, mid) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("diff dispatcher enforces ranks") {
  DiskGrid g(17);
  ScalarField f(g);
  VecField v(g);
  CHECK_THROWS_AS(diff(FieldAny(f), DiffKind::Div), std::invalid_argument);
  CHECK_THROWS_AS(diff(FieldAny(v), DiffKind::Grad), std::invalid_argument);
  CHECK_NOTHROW(diff(FieldAny(f), DiffKind::Laplacian));
  CHECK_NOTHROW(diff(FieldAny(v), DiffKind::Curl));
}
