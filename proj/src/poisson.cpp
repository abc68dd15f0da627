#include "disklab/poisson.hpp"

#include <cmath>
#include <vector>

namespace disklab {

namespace {

// Unknowns live in full lattice arrays; entries outside the unknown set stay
// zero so the five-point matvec can read neighbours unconditionally.
struct Stencil {
  const DiskGrid* g;
  BcKind bc;
  std::vector<int> unknowns;   // node indices
  std::vector<double> degree;  // # of stencil neighbours inside the unknown set

  explicit Stencil(const DiskGrid& grid, BcKind kind) : g(&grid), bc(kind) {
    const int n = g->n();
    degree.assign(static_cast<size_t>(n) * n, 0.0);
    if (bc == BcKind::Dirichlet) {
      unknowns = g->interior();
      for (int idx : unknowns) degree[idx] = 4.0;
    } else {
      unknowns.reserve(g->interior().size() + g->boundary().size());
      for (int idx = 0; idx < n * n; ++idx)
        if (g->node_class(idx) != NodeClass::Exterior) unknowns.push_back(idx);
      for (int idx : unknowns) {
        const int i = idx / n, j = idx % n;
        double d = 0.0;
        if (g->in_domain(i + 1, j)) d += 1.0;
        if (g->in_domain(i - 1, j)) d += 1.0;
        if (g->in_domain(i, j + 1)) d += 1.0;
        if (g->in_domain(i, j - 1)) d += 1.0;
        degree[idx] = d;
      }
    }
  }

  // y = (-Laplacian) x, SPD on the unknown set.
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const int n = g->n();
    const double inv_h2 = 1.0 / (g->spacing() * g->spacing());
    for (int idx : unknowns) {
      const int i = idx / n, j = idx % n;
      double s = degree[idx] * x[idx];
      if (i + 1 < n) s -= x[idx + n];
      if (i - 1 >= 0) s -= x[idx - n];
      if (j + 1 < n) s -= x[idx + 1];
      if (j - 1 >= 0) s -= x[idx - 1];
      y[idx] = s * inv_h2;
    }
  }

  double dot(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (int idx : unknowns) s += a[idx] * b[idx];
    return s;
  }

  void remove_mean(std::vector<double>& a) const {
    double s = 0.0;
    for (int idx : unknowns) s += a[idx];
    s /= static_cast<double>(unknowns.size());
    for (int idx : unknowns) a[idx] -= s;
  }
};

}  // namespace

PoissonResult solve_poisson(const PoissonProblem& p) {
  if (!p.rhs) throw std::invalid_argument("solve_poisson: rhs required");
  const DiskGrid& g = p.rhs->grid();
  const int n = g.n();
  const size_t m = static_cast<size_t>(n) * n;
  const Stencil st(g, p.bc);
  const int max_iter = p.max_iter > 0 ? p.max_iter : 20 * n * n;

  PoissonResult res;
  res.u = ScalarField(g);

  // b = -rhs (+ Dirichlet boundary contributions).
  std::vector<double> b(m, 0.0);
  if (p.bc == BcKind::Dirichlet) {
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    for (int idx : st.unknowns) b[idx] = -(*p.rhs)[idx];
    if (p.trace) {
      for (int idx : g.boundary()) res.u[idx] = (*p.trace)[idx];
      for (int idx : st.unknowns) {
        const int i = idx / n, j = idx % n;
        double s = 0.0;
        if (g.node_class(i + 1, j) == NodeClass::Boundary) s += (*p.trace)(i + 1, j);
        if (g.node_class(i - 1, j) == NodeClass::Boundary) s += (*p.trace)(i - 1, j);
        if (g.node_class(i, j + 1) == NodeClass::Boundary) s += (*p.trace)(i, j + 1);
        if (g.node_class(i, j - 1) == NodeClass::Boundary) s += (*p.trace)(i, j - 1);
        b[idx] += s * inv_h2;
      }
    }
  } else {
    // Quadrature-mean correction keeps the continuum compatibility condition;
    // the small discrete defect against the lattice kernel (the constant
    // vector) is projected out below so CG stays in the range of the operator.
    double vol = 0.0, mean = 0.0;
    for (int idx : st.unknowns) {
      vol += g.quad_weight(idx);
      mean += g.quad_weight(idx) * (*p.rhs)[idx];
    }
    mean /= vol;
    res.mean_removed = mean;
    for (int idx : st.unknowns) b[idx] = -((*p.rhs)[idx] - mean);
    st.remove_mean(b);
  }

  std::vector<double> x(m, 0.0);
  if (p.initial) {
    for (int idx : st.unknowns) x[idx] = (*p.initial)[idx];
    if (p.bc == BcKind::Neumann) st.remove_mean(x);
  }

  const double bnorm = std::sqrt(st.dot(b, b));
  std::vector<double> r(m, 0.0), q(m, 0.0), d(m, 0.0);
  if (bnorm == 0.0) {
    for (int idx : st.unknowns) res.u[idx] = 0.0;
  } else {
    st.apply(x, q);
    for (int idx : st.unknowns) r[idx] = b[idx] - q[idx];
    if (p.bc == BcKind::Neumann) st.remove_mean(r);
    d = r;
    double rs = st.dot(r, r);
    int it = 0;
    while (std::sqrt(rs) / bnorm > p.tol) {
      if (++it > max_iter)
        throw SolveError("solve_poisson: CG did not reach tolerance", std::sqrt(rs) / bnorm, it);
      st.apply(d, q);
      const double alpha = rs / st.dot(d, q);
      for (int idx : st.unknowns) {
        x[idx] += alpha * d[idx];
        r[idx] -= alpha * q[idx];
      }
      if (p.bc == BcKind::Neumann && it % 50 == 0) st.remove_mean(r);
      const double rs_new = st.dot(r, r);
      const double beta = rs_new / rs;
      rs = rs_new;
      for (int idx : st.unknowns) d[idx] = r[idx] + beta * d[idx];
    }
    res.rel_residual = std::sqrt(rs) / bnorm;
    res.iterations = it;
    for (int idx : st.unknowns) res.u[idx] = x[idx];
  }

  if (p.bc == BcKind::Neumann) {
    // Zero quadrature mean fixes the additive gauge.
    double vol = 0.0, mean = 0.0;
    for (int idx : st.unknowns) {
      vol += g.quad_weight(idx);
      mean += g.quad_weight(idx) * res.u[idx];
    }
    mean /= vol;
    for (int idx : st.unknowns) res.u[idx] -= mean;
  }
  return res;
}

ScalarField solve_dirichlet(const ScalarField& rhs, const ScalarField* trace,
                            const ScalarField* initial) {
  PoissonProblem p;
  p.rhs = &rhs;
  p.bc = BcKind::Dirichlet;
  p.trace = trace;
  p.initial = initial;
  return solve_poisson(p).u;
}

ScalarField solve_neumann(const ScalarField& rhs, const ScalarField* initial) {
  PoissonProblem p;
  p.rhs = &rhs;
  p.bc = BcKind::Neumann;
  p.initial = initial;
  return solve_poisson(p).u;
}

}  // namespace disklab
