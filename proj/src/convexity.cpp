#include "disklab/convexity.hpp"

#include <cmath>
#include <stdexcept>

#include "disklab/calculus.hpp"
#include "disklab/poisson.hpp"
#include "disklab/rng.hpp"

namespace disklab {

ConvexityReport convexity_report(const MapField& u, const MapField& v) {
  const DiskGrid& g = u.grid();
  const int n = u.dim();
  if (v.dim() != n) throw std::invalid_argument("convexity_report: dimension mismatch");

  MapField diff(g, n);
  const int total = g.n() * g.n();
  for (int c = 0; c < n; ++c)
    for (int idx = 0; idx < total; ++idx)
      diff.component(c)[idx] = v.component(c)[idx] - u.component(c)[idx];

  const ScalarField gu2 = grad_norm2(u);
  const ScalarField gv2 = grad_norm2(v);
  const ScalarField gd2 = grad_norm2(diff);

  ConvexityReport rep;
  rep.int_gu2 = integrate(gu2);
  rep.int_gv2 = integrate(gv2);
  rep.int_gd2 = integrate(gd2);
  rep.gap = rep.int_gv2 - rep.int_gu2 - 0.5 * rep.int_gd2;
  rep.psi_direct = rep.int_gv2 - rep.int_gu2 - rep.int_gd2;

  auto quad = [&](auto&& f) {
    double s = 0.0;
    for (int idx : g.interior()) s += g.quad_weight(idx) * f(idx);
    for (int idx : g.boundary()) s += g.quad_weight(idx) * f(idx);
    return s;
  };

  rep.psi_tension = quad([&](int idx) {
    double dv = 0.0;
    for (int c = 0; c < n; ++c) dv += diff.component(c)[idx] * u.component(c)[idx];
    return 2.0 * dv * gu2[idx];
  });

  const ScalarField psi = solve_dirichlet(gu2);
  const VecField gpsi = grad(psi);
  rep.grad_psi_l2 = l2_norm(gpsi);
  for (int idx : g.interior()) rep.psi_linf = std::max(rep.psi_linf, std::fabs(psi[idx]));

  rep.chain_lhs = quad([&](int idx) {
    double d2 = 0.0;
    for (int c = 0; c < n; ++c) d2 += diff.component(c)[idx] * diff.component(c)[idx];
    return d2 * gu2[idx];
  });
  rep.chain_mid = quad([&](int idx) {
    double d2 = 0.0;
    for (int c = 0; c < n; ++c) d2 += diff.component(c)[idx] * diff.component(c)[idx];
    return d2 * gpsi.at(idx).norm2();
  });
  return rep;
}

MapField make_competitor(const MapField& u, double amp, uint64_t seed) {
  const DiskGrid& g = u.grid();
  const int n = u.dim(), nn = g.n();
  MapField v = u;
  Rng rng(seed, "competitor");
  constexpr double kPi = 3.14159265358979323846;
  for (int c = 0; c < n; ++c) {
    double a[6];
    for (double& w : a) w = rng.uniform(-1.0, 1.0);
    ScalarField& vc = v.component(c);
    for (int idx : g.interior()) {
      const Vec2 p = g.node(idx / nn, idx % nn);
      const double q = 1.0 - p.norm2();
      const double w = a[0] + a[1] * p.x + a[2] * p.y + a[3] * std::sin(kPi * p.x) +
                       a[4] * std::sin(kPi * p.y) + a[5] * p.x * p.y;
      vc[idx] += amp * q * q * w;
    }
  }
  for (int idx : g.interior()) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += v.component(c)[idx] * v.component(c)[idx];
    s = std::sqrt(s);
    if (s < 0.2) throw std::runtime_error("make_competitor: projection collapsed (|v| < 0.2)");
    for (int c = 0; c < n; ++c) v.component(c)[idx] /= s;
  }
  return v;
}

double normal_component_gap(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("normal_component_gap: dimension mismatch");
  double inner = 0.0, d2 = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    inner += (p[k] - q[k]) * p[k];
    d2 += (p[k] - q[k]) * (p[k] - q[k]);
  }
  return std::fabs(inner - 0.5 * d2);
}

double w12_distance(const MapField& a, const MapField& b) {
  const DiskGrid& g = a.grid();
  const int n = a.dim();
  if (b.dim() != n) throw std::invalid_argument("w12_distance: dimension mismatch");
  MapField diff(g, n);
  const int total = g.n() * g.n();
  for (int c = 0; c < n; ++c)
    for (int idx = 0; idx < total; ++idx)
      diff.component(c)[idx] = a.component(c)[idx] - b.component(c)[idx];
  const ScalarField gd2 = grad_norm2(diff);
  double s = integrate(gd2);
  for (int c = 0; c < n; ++c) {
    const double l2 = l2_norm(diff.component(c));
    s += l2 * l2;
  }
  return std::sqrt(s);
}

}  // namespace disklab
