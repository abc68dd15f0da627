#include "disklab/flow.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "disklab/calculus.hpp"
#include "disklab/poisson.hpp"
#include "disklab/rng.hpp"

namespace disklab {

MapField harmonic_extension(const DiskGrid& g, const BoundaryTrace& trace) {
  MapField u(g, trace.dim());
  ScalarField zero(g);
  for (int c = 0; c < trace.dim(); ++c) {
    const ScalarField bc = trace.component_field(g, c);
    u.component(c) = solve_dirichlet(zero, &bc);
  }
  return u;
}

MapField sphere_tension(const MapField& u) {
  const DiskGrid& g = u.grid();
  const int n = u.dim();
  MapField f(g, n);
  const ScalarField g2 = grad_norm2(u);
  for (int c = 0; c < n; ++c) {
    const ScalarField lap = laplacian(u.component(c));
    for (int idx : g.interior())
      f.component(c)[idx] = lap[idx] + g2[idx] * u.component(c)[idx];
  }
  return f;
}

namespace {

struct BoundaryGradTerms {
  // flattened one-sided/centred stencils for both axes at boundary nodes
  struct Term {
    int target;  // node index whose value is read
    double c;
  };
  std::vector<int> node;
  std::vector<std::array<Term, 4>> terms;  // [axis*2 + slot]
  std::vector<std::array<int, 2>> counts;

  BoundaryGradTerms(const DiskGrid& g) {
    const int n = g.n();
    for (int idx : g.boundary()) {
      const int i = idx / n, j = idx % n;
      std::array<Term, 4> t{};
      std::array<int, 2> cnt{};
      for (int axis = 0; axis < 2; ++axis) {
        DerivTerm dt[2];
        cnt[axis] = deriv_stencil(g, i, j, axis, dt);
        for (int k = 0; k < cnt[axis]; ++k)
          t[axis * 2 + k] = {g.index(i + dt[k].di, j + dt[k].dj), dt[k].c};
      }
      node.push_back(idx);
      terms.push_back(t);
      counts.push_back(cnt);
    }
  }
};

struct PassResult {
  double energy;
  double res_l2;
};

// One sweep over the grid: tension into f, Dirichlet energy (interior centred
// plus boundary one-sided contributions) and residual norm.
PassResult flow_pass(const DiskGrid& g, const MapField& u,
                     const BoundaryGradTerms& bnd, MapField& f) {
  const int n = g.n();
  const int dim = u.dim();
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h), inv_2h = 0.5 / h;
  const double w_int = h * h;
  double energy2 = 0.0;  // accumulates integral of |grad u|^2
  double res2 = 0.0;
  std::vector<const double*> up(dim);
  std::vector<double*> fp(dim);
  for (int c = 0; c < dim; ++c) {
    up[c] = u.component(c).data().data();
    fp[c] = f.component(c).data().data();
  }
  std::vector<double> lap(dim);
  for (int idx : g.interior()) {
    double g2 = 0.0, ldotu = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double gx = (up[c][idx + n] - up[c][idx - n]) * inv_2h;
      const double gy = (up[c][idx + 1] - up[c][idx - 1]) * inv_2h;
      g2 += gx * gx + gy * gy;
      lap[c] = (up[c][idx + n] + up[c][idx - n] + up[c][idx + 1] + up[c][idx - 1] -
                4.0 * up[c][idx]) *
               inv_h2;
      ldotu += lap[c] * up[c][idx];
    }
    // Tangential part of the Laplacian: the unprojected tension carries an
    // O(h^2) normal defect that the sphere projection annihilates anyway, so
    // criticality is measured (and the step taken) tangentially.
    double fres2 = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double t = lap[c] - ldotu * up[c][idx];
      fp[c][idx] = t;
      fres2 += t * t;
    }
    energy2 += w_int * g2;
    res2 += w_int * fres2;
  }
  const double w_bnd = 0.5 * h * h;
  for (size_t k = 0; k < bnd.node.size(); ++k) {
    double g2 = 0.0;
    for (int c = 0; c < dim; ++c) {
      for (int axis = 0; axis < 2; ++axis) {
        double d = 0.0;
        for (int s = 0; s < bnd.counts[k][axis]; ++s) {
          const auto& t = bnd.terms[k][axis * 2 + s];
          d += t.c * up[c][t.target];
        }
        g2 += d * d;
      }
    }
    energy2 += w_bnd * g2;
  }
  return {0.5 * energy2, std::sqrt(res2)};
}

}  // namespace

FlowResult solve_harmonic_sphere(const DiskGrid& g, const BoundaryTrace& trace,
                                 const FlowConfig& cfg) {
  const double h = g.spacing();
  const double dt0 = (cfg.dt > 0.0) ? cfg.dt : h * h / 8.0;
  if (dt0 > h * h / 8.0)
    throw std::invalid_argument("solve_harmonic_sphere: dt exceeds h^2/8");
  const int dim = trace.dim();

  MapField cur = harmonic_extension(g, trace);
  if (cfg.perturb_amp != 0.0) {
    Rng rng(cfg.seed, "flow-init");
    for (int c = 0; c < dim; ++c) {
      double a[6];
      for (double& v : a) v = rng.uniform(-1.0, 1.0);
      ScalarField& uc = cur.component(c);
      for (int idx : g.interior()) {
        const Vec2 p = g.node(idx / g.n(), idx % g.n());
        const double cut = (1.0 - p.norm2()) * (1.0 - p.norm2());
        const double w = a[0] + a[1] * p.x + a[2] * p.y + a[3] * std::sin(3.14159265358979323846 * p.x) +
                         a[4] * std::sin(3.14159265358979323846 * p.y) + a[5] * p.x * p.y;
        uc[idx] += cfg.perturb_amp * cut * w;
      }
    }
  }
  // nodewise projection to the sphere
  auto project = [&](MapField& u) {
    for (int idx : g.interior()) {
      double s = 0.0;
      for (int c = 0; c < dim; ++c) s += u.component(c)[idx] * u.component(c)[idx];
      s = std::sqrt(s);
      if (s < 0.2)
        throw std::runtime_error("solve_harmonic_sphere: projection collapsed (|u| < 0.2)");
      for (int c = 0; c < dim; ++c) u.component(c)[idx] /= s;
    }
  };
  project(cur);

  const BoundaryGradTerms bnd(g);
  MapField nxt = cur, fcur(g, dim), fnxt(g, dim);
  PassResult pc = flow_pass(g, cur, bnd, fcur);

  FlowResult out;
  out.dt_final = dt0;
  double dt = dt0;
  long accepted_streak = 0;
  int halvings = 0;
  const long hist_every = std::max(1, cfg.history_every);

  while (pc.res_l2 > cfg.tol) {
    if (out.steps >= cfg.max_steps) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "solve_harmonic_sphere: residual %.3e after %ld steps (tol %.3e)",
                    pc.res_l2, out.steps, cfg.tol);
      throw SolveError(msg, pc.res_l2, static_cast<int>(out.steps));
    }
    // trial step
    for (int c = 0; c < dim; ++c) {
      const double* uc = cur.component(c).data().data();
      const double* fc = fcur.component(c).data().data();
      double* nc = nxt.component(c).data().data();
      for (int idx : g.interior()) nc[idx] = uc[idx] + dt * fc[idx];
    }
    project(nxt);
    const PassResult pn = flow_pass(g, nxt, bnd, fnxt);
    const double slack = 1e-12 * std::max(1.0, std::fabs(pc.energy));
    if (pn.energy <= pc.energy + slack) {
      std::swap(cur, nxt);
      std::swap(fcur, fnxt);
      pc = pn;
      ++out.steps;
      ++accepted_streak;
      if (out.steps % hist_every == 0) out.residual_history.push_back(pc.res_l2);
      if (accepted_streak >= 4000 && dt < dt0) {
        dt = std::min(dt0, 2.0 * dt);
        accepted_streak = 0;
      }
    } else {
      dt *= 0.5;
      accepted_streak = 0;
      if (++halvings > 200 || dt < 1e-8 * dt0) {
        throw SolveError("solve_harmonic_sphere: step size collapsed before reaching tol",
                         pc.res_l2, static_cast<int>(out.steps));
      }
    }
  }
  out.u = cur;
  out.energy = pc.energy;
  out.residual = pc.res_l2;
  out.dt_final = dt;
  return out;
}

}  // namespace disklab
