#include "disklab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "disklab/calculus.hpp"
#include "disklab/norms.hpp"

namespace disklab {

namespace {

// Mass-normalized discrete convolution |(phi_t * f)(x)| at node (i,j).
// Support of phi_t is the disk of radius t/2 around x, which stays inside
// the unit disk for t <= 1-|x|, so every sampled node carries a value.
double mollified_at(const ScalarField& f, const RadialBump& phi, int i, int j,
                    double t) {
  const DiskGrid& g = f.grid();
  const double h = g.spacing();
  const double rad = t * phi.support_r;
  const int box = static_cast<int>(std::floor(rad / h));
  if (box < 1) return std::fabs(f(i, j));
  double num = 0.0, den = 0.0;
  for (int di = -box; di <= box; ++di) {
    for (int dj = -box; dj <= box; ++dj) {
      const double r = h * std::sqrt(double(di * di + dj * dj));
      if (r >= rad) continue;
      const double w = phi(r / t);
      if (w == 0.0) continue;
      num += w * f(i + di, j + dj);
      den += w;
    }
  }
  if (den == 0.0) return std::fabs(f(i, j));
  return std::fabs(num / den);
}

}  // namespace

ScalarField radial_maximal(const ScalarField& f, const RadialBump& phi) {
  const DiskGrid& g = f.grid();
  const double h = g.spacing();
  ScalarField out(g);
  std::vector<double> scales;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      if (g.node_class(i, j) == NodeClass::Exterior) continue;
      const double dist = 1.0 - g.node(i, j).norm();
      // the scale-zero limit of the mollification is |f| itself
      double best = std::fabs(f(i, j));
      if (dist > h) {
        scales.clear();
        double t = dist;
        while (t > h) {
          scales.push_back(t);
          t *= 0.5;
        }
        // spacing-aligned dyadic scales
        for (double ta = 2.0 * h; ta < dist; ta *= 2.0) scales.push_back(ta);
        for (double tv : scales) best = std::max(best, mollified_at(f, phi, i, j, tv));
      }
      out(i, j) = best;
    }
  }
  return out;
}

HardyReport h1_norm(const ScalarField& f, const RadialBump& phi) {
  HardyReport rep;
  rep.fstar = radial_maximal(f, phi);
  rep.h1 = integrate(rep.fstar);
  rep.l1 = l1_norm(f);
  return rep;
}

WenteReport wente_solve(const ScalarField& a, const ScalarField& b, BcKind bc) {
  const DiskGrid& g = a.grid();
  const VecField ga = grad(a), gb = grad(b);
  ScalarField rhs(g);
  for (size_t idx = 0; idx < rhs.data().size(); ++idx) {
    const int k = static_cast<int>(idx);
    if (g.node_class(k) == NodeClass::Exterior) continue;
    rhs[k] = ga.y[k] * gb.x[k] - ga.x[k] * gb.y[k];
  }
  WenteReport rep;
  rep.w = (bc == BcKind::Dirichlet) ? solve_dirichlet(rhs) : solve_neumann(rhs);
  rep.w_linf = linf_norm(rep.w);
  const VecField gw = grad(rep.w);
  rep.grad_l2 = l2_norm(gw);
  ScalarField gwabs(g);
  for (size_t idx = 0; idx < gwabs.data().size(); ++idx)
    gwabs[static_cast<int>(idx)] = gw.at(static_cast<int>(idx)).norm();
  rep.grad_l21 = lorentz21_norm(gwabs);
  rep.denom = l2_norm(ga) * l2_norm(gb);
  return rep;
}

double appendix_identity_gap(Vec2 x, Vec2 y) {
  const double rx = x.norm();
  if (rx < 1e-12)
    throw std::invalid_argument("appendix_identity_gap: x too close to 0, use the limit form");
  const Vec2 m{x.x / rx - rx * y.x, x.y / rx - rx * y.y};
  const double lhs = (1.0 - x.norm2()) * (1.0 - y.norm2());
  const double rhs = m.norm2() - (x - y).norm2();
  return std::fabs(lhs - rhs);
}

double l_x(Vec2 x, Vec2 y, const RadialBump& theta) {
  const double dist = (x - y).norm();
  if (dist < 1e-12) throw std::invalid_argument("l_x: x and y coincide");
  const double inv_gap = 1.0 / (1.0 - x.norm());
  const int jmax = static_cast<int>(std::ceil(std::log2(1.0 / dist))) + 8;
  double s = 0.0;
  double p = 1.0;
  for (int j = 0; j <= jmax; ++j, p *= 2.0) {
    const double arg = p * dist * inv_gap;
    if (arg >= theta.support_r) {
      // later terms only grow the argument
      break;
    }
    s += theta(arg);
  }
  return s;
}

SandwichResult sandwich_check(Vec2 x, Vec2 y, const RadialBump& theta) {
  const double dist = (x - y).norm();
  if (dist < 1e-12) throw std::invalid_argument("sandwich_check: x and y coincide");
  const double rx = x.norm();
  double mirror;  // |x/|x| - |x| y|, -> 1 as x -> 0
  if (rx < 1e-12) {
    mirror = 1.0;
  } else {
    mirror = Vec2{x.x / rx - rx * y.x, x.y / rx - rx * y.y}.norm();
  }
  SandwichResult res;
  res.lx = l_x(x, y, theta);
  res.s = std::log(dist) - std::log(mirror) + res.lx * std::log(2.0);
  return res;
}

H1DirichletReport solve_h1_dirichlet(const ScalarField& f, const RadialBump& phi) {
  for (size_t idx = 0; idx < f.data().size(); ++idx) {
    if (f.grid().node_class(static_cast<int>(idx)) == NodeClass::Exterior) continue;
    if (f[static_cast<int>(idx)] < 0.0)
      throw std::invalid_argument("solve_h1_dirichlet: f must be nonnegative");
  }
  H1DirichletReport rep;
  rep.psi = solve_dirichlet(f);
  rep.psi_linf = linf_norm(rep.psi);
  rep.grad_l2 = l2_norm(grad(rep.psi));
  rep.h1_f = h1_norm(f, phi).h1;
  rep.ratio = (rep.h1_f > 0.0) ? (rep.psi_linf + rep.grad_l2) / rep.h1_f : 0.0;
  return rep;
}

}  // namespace disklab
