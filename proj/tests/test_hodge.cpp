#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "disklab/calculus.hpp"
#include "disklab/hodge.hpp"
#include "doctest.h"

using namespace disklab;

TEST_CASE("perp-potential fit recovers a known stream function") {
  DiskGrid g(33);
  ScalarField s = ScalarField::sample(g, [](Vec2 p) { return p.x * p.x * p.y - 0.2 * p.y; });
  VecField v = perp_grad(s);
  const PerpPotentialFit fitter(g);
  double defect = 0.0;
  ScalarField e = fitter.fit(v, &defect);
  // exact discrete data: the defect is numerically zero and the potential
  // matches s up to its quadrature mean
  CHECK(defect < 1e-9);
  const double mean_s = integrate(s) / integrate(ScalarField(g, 1.0));
  double worst = 0.0;
  for (int idx : g.interior()) worst = std::max(worst, std::abs(e[idx] - (s[idx] - mean_s)));
  CHECK(worst < 1e-8);
}

TEST_CASE("fit reports the honest defect for a non-rotational field") {
  DiskGrid g(33);
  // pure gradient field: nothing for a perp potential to capture
  ScalarField s = ScalarField::sample(g, [](Vec2 p) { return p.x * p.x + p.y; });
  VecField v = grad(s);
  const PerpPotentialFit fitter(g);
  double defect = 0.0;
  ScalarField e = fitter.fit(v, &defect);
  const double vnorm = l2_norm(v);
  CHECK(defect > 0.8 * vnorm);  // nearly everything is defect
  CHECK(std::abs(integrate(e)) < 1e-8);
}

TEST_CASE("decomposition splits a mixed field and is small on the residual") {
  DiskGrid g(65);
  ScalarField a = ScalarField::sample(g, [](Vec2 p) { return std::sin(p.x) * p.y; });
  ScalarField b = ScalarField::sample(g, [](Vec2 p) { return p.x * p.y * p.y; });
  VecField v(g);
  const VecField ga = grad(a), pb = perp_grad(b);
  for (int idx : g.interior()) v.set(idx, ga.at(idx) + pb.at(idx));
  for (int idx : g.boundary()) v.set(idx, ga.at(idx) + pb.at(idx));

  HodgeData hd = hodge_decompose(v);
  CHECK(hd.residual < 0.05 * l2_norm(v));

  // the div part has zero trace by construction
  for (int idx : g.boundary()) CHECK(hd.d.component(0)[idx] == doctest::Approx(0.0));
}

TEST_CASE("decomposition residual shrinks under refinement") {
  auto residual_at = [](int n) {
    DiskGrid g(n);
    ScalarField a = ScalarField::sample(g, [](Vec2 p) { return std::cos(2.0 * p.y) + p.x; });
    ScalarField b = ScalarField::sample(g, [](Vec2 p) { return std::exp(0.5 * p.x) * p.y; });
    VecField v(g);
    const VecField ga = grad(a), pb = perp_grad(b);
    for (int idx : g.interior()) v.set(idx, ga.at(idx) + pb.at(idx));
    for (int idx : g.boundary()) v.set(idx, ga.at(idx) + pb.at(idx));
    return hodge_decompose(v).residual;
  };
  const double r33 = residual_at(33), r65 = residual_at(65);
  CHECK(r33 / r65 > 1.4);
}

TEST_CASE("multi-component overload concatenates residuals") {
  DiskGrid g(33);
  ScalarField s = ScalarField::sample(g, [](Vec2 p) { return p.x * p.y; });
  VecField v = perp_grad(s);
  const double single = hodge_decompose(v).residual;
  const double both = hodge_decompose(std::vector<VecField>{v, v}).residual;
  CHECK(both == doctest::Approx(single * std::sqrt(2.0)).epsilon(1e-9));
}
