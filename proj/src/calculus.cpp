#include "disklab/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace disklab {

namespace {

// Derivative of f along axis 0 (x) or 1 (y) at a non-Exterior node.
double deriv(const ScalarField& f, int i, int j, int axis) {
  DerivTerm t[2];
  const int k = deriv_stencil(f.grid(), i, j, axis, t);
  double s = 0.0;
  for (int m = 0; m < k; ++m) s += t[m].c * f(i + t[m].di, j + t[m].dj);
  return s;
}

template <typename F>
void for_domain(const DiskGrid& g, F&& body) {
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (g.node_class(i, j) != NodeClass::Exterior) body(i, j);
}

}  // namespace

int deriv_stencil(const DiskGrid& g, int i, int j, int axis, DerivTerm out[2]) {
  const double h = g.spacing();
  const int di = (axis == 0 ? 1 : 0), dj = (axis == 1 ? 1 : 0);
  const bool has_p = g.in_domain(i + di, j + dj);
  const bool has_m = g.in_domain(i - di, j - dj);
  if (has_p && has_m) {
    out[0] = {di, dj, 0.5 / h};
    out[1] = {-di, -dj, -0.5 / h};
    return 2;
  }
  if (has_p) {
    out[0] = {di, dj, 1.0 / h};
    out[1] = {0, 0, -1.0 / h};
    return 2;
  }
  if (has_m) {
    out[0] = {0, 0, 1.0 / h};
    out[1] = {-di, -dj, -1.0 / h};
    return 2;
  }
  return 0;
}

VecField grad(const ScalarField& f) {
  VecField out(f.grid());
  for_domain(f.grid(), [&](int i, int j) {
    out.x(i, j) = deriv(f, i, j, 0);
    out.y(i, j) = deriv(f, i, j, 1);
  });
  return out;
}

VecField perp_grad(const ScalarField& f) {
  VecField out(f.grid());
  for_domain(f.grid(), [&](int i, int j) {
    out.x(i, j) = -deriv(f, i, j, 1);
    out.y(i, j) = deriv(f, i, j, 0);
  });
  return out;
}

ScalarField divergence(const VecField& v) {
  ScalarField out(v.grid());
  for_domain(v.grid(), [&](int i, int j) {
    out(i, j) = deriv(v.x, i, j, 0) + deriv(v.y, i, j, 1);
  });
  return out;
}

ScalarField curl(const VecField& v) {
  ScalarField out(v.grid());
  for_domain(v.grid(), [&](int i, int j) {
    out(i, j) = deriv(v.y, i, j, 0) - deriv(v.x, i, j, 1);
  });
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const DiskGrid& g = f.grid();
  ScalarField out(g);
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  const int n = g.n();
  for (int idx : g.interior()) {
    const int i = idx / n, j = idx % n;
    out[idx] = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) -
                4.0 * f(i, j)) *
               inv_h2;
  }
  return out;
}

FieldAny diff(const FieldAny& f, DiffKind kind) {
  const bool scalar_in = std::holds_alternative<ScalarField>(f);
  switch (kind) {
    case DiffKind::Grad:
      if (!scalar_in) throw std::invalid_argument("diff: grad needs a scalar field");
      return grad(std::get<ScalarField>(f));
    case DiffKind::PerpGrad:
      if (!scalar_in)
        throw std::invalid_argument("diff: perp_grad needs a scalar field");
      return perp_grad(std::get<ScalarField>(f));
    case DiffKind::Laplacian:
      if (!scalar_in)
        throw std::invalid_argument("diff: laplacian needs a scalar field");
      return laplacian(std::get<ScalarField>(f));
    case DiffKind::Div:
      if (scalar_in) throw std::invalid_argument("diff: div needs a vector field");
      return divergence(std::get<VecField>(f));
    case DiffKind::Curl:
      if (scalar_in) throw std::invalid_argument("diff: curl needs a vector field");
      return curl(std::get<VecField>(f));
  }
  throw std::invalid_argument("diff: unknown kind");
}

double integrate(const ScalarField& f) {
  const DiskGrid& g = f.grid();
  double s = 0.0;
  const size_t m = f.data().size();
  for (size_t idx = 0; idx < m; ++idx) {
    const double w = g.quad_weight(static_cast<int>(idx));
    if (w != 0.0) s += w * f[static_cast<int>(idx)];
  }
  return s;
}

double l2_norm(const ScalarField& f) {
  const DiskGrid& g = f.grid();
  double s = 0.0;
  for (size_t idx = 0; idx < f.data().size(); ++idx) {
    const double w = g.quad_weight(static_cast<int>(idx));
    if (w != 0.0) s += w * f[static_cast<int>(idx)] * f[static_cast<int>(idx)];
  }
  return std::sqrt(s);
}

double l2_norm(const VecField& f) {
  const DiskGrid& g = f.grid();
  double s = 0.0;
  for (size_t idx = 0; idx < f.x.data().size(); ++idx) {
    const double w = g.quad_weight(static_cast<int>(idx));
    if (w != 0.0) s += w * f.at(static_cast<int>(idx)).norm2();
  }
  return std::sqrt(s);
}

double linf_norm(const ScalarField& f) {
  const DiskGrid& g = f.grid();
  double m = 0.0;
  for (size_t idx = 0; idx < f.data().size(); ++idx) {
    if (g.node_class(static_cast<int>(idx)) == NodeClass::Exterior) continue;
    m = std::max(m, std::fabs(f[static_cast<int>(idx)]));
  }
  return m;
}

double l1_norm(const ScalarField& f) {
  const DiskGrid& g = f.grid();
  double s = 0.0;
  for (size_t idx = 0; idx < f.data().size(); ++idx) {
    const double w = g.quad_weight(static_cast<int>(idx));
    if (w != 0.0) s += w * std::fabs(f[static_cast<int>(idx)]);
  }
  return s;
}

ScalarField grad_norm2(const MapField& u) {
  ScalarField out(u.grid());
  for (int c = 0; c < u.dim(); ++c) {
    const VecField gc = grad(u.component(c));
    for (size_t idx = 0; idx < out.data().size(); ++idx)
      out[static_cast<int>(idx)] += gc.at(static_cast<int>(idx)).norm2();
  }
  return out;
}

double dirichlet_energy(const MapField& u) { return 0.5 * integrate(grad_norm2(u)); }

}  // namespace disklab
