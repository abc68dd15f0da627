#include "disklab/hodge.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "disklab/calculus.hpp"
#include "disklab/poisson.hpp"

namespace disklab {

struct PerpPotentialFit::Impl {
  const DiskGrid* g = nullptr;
  std::vector<int> nodes;     // sorted non-Exterior lattice indices
  std::vector<int> unknown;   // lattice idx -> unknown id, -1 pinned or outside
  std::vector<double> fit_w;  // per-lattice-idx fit weight (quad weight * taper)

  // One row of the stencil operator per (node, axis): value of that
  // perp-gradient component is sum of c * e(target).
  struct Row {
    int node;       // lattice idx the row belongs to (for weights and rhs)
    int axis;       // 0: -d/dy, 1: +d/dx
    int target[2];  // lattice indices
    double c[2];
    int count;
  };
  std::vector<Row> rows;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
};

PerpPotentialFit::PerpPotentialFit(const DiskGrid& g, double rim_taper)
    : impl_(new Impl) {
  Impl& im = *impl_;
  im.g = &g;
  const int nn = g.n();
  im.nodes.resize(g.interior().size() + g.boundary().size());
  std::merge(g.interior().begin(), g.interior().end(), g.boundary().begin(),
             g.boundary().end(), im.nodes.begin());
  im.fit_w.assign(static_cast<size_t>(nn) * nn, 0.0);
  for (int idx : im.nodes) {
    double w = g.quad_weight(idx);
    if (rim_taper > 0.0) {
      const Vec2 p = g.node(idx / nn, idx % nn);
      const double t = std::clamp((1.0 - p.norm()) / rim_taper, 0.0, 1.0);
      w *= std::max(t * t, 1e-6);
    }
    im.fit_w[idx] = w;
  }
  im.unknown.assign(static_cast<size_t>(nn) * nn, -1);
  // Pin the first domain node: the objective only sees differences of e, so
  // fixing one value makes the normal matrix definite without moving the
  // minimum.
  for (size_t k = 1; k < im.nodes.size(); ++k)
    im.unknown[im.nodes[k]] = static_cast<int>(k) - 1;

  im.rows.reserve(im.nodes.size() * 2);
  DerivTerm t[2];
  for (int idx : im.nodes) {
    const int i = idx / nn, j = idx % nn;
    // perp_grad = (-d/dy, d/dx)
    for (int axis = 0; axis < 2; ++axis) {
      const int daxis = (axis == 0) ? 1 : 0;
      const double sign = (axis == 0) ? -1.0 : 1.0;
      const int cnt = deriv_stencil(g, i, j, daxis, t);
      Impl::Row row;
      row.node = idx;
      row.axis = axis;
      row.count = cnt;
      for (int m = 0; m < cnt; ++m) {
        row.target[m] = g.index(i + t[m].di, j + t[m].dj);
        row.c[m] = sign * t[m].c;
      }
      im.rows.push_back(row);
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(im.rows.size() * 4);
  for (const Impl::Row& row : im.rows) {
    const double w = im.fit_w[row.node];
    for (int a = 0; a < row.count; ++a) {
      const int ua = im.unknown[row.target[a]];
      if (ua < 0) continue;
      for (int b = 0; b < row.count; ++b) {
        const int ub = im.unknown[row.target[b]];
        if (ub < 0) continue;
        trips.emplace_back(ua, ub, w * row.c[a] * row.c[b]);
      }
    }
  }
  const int m = static_cast<int>(im.nodes.size()) - 1;
  Eigen::SparseMatrix<double> mat(m, m);
  mat.setFromTriplets(trips.begin(), trips.end());
  im.chol.compute(mat);
  if (im.chol.info() != Eigen::Success)
    throw SolveError("PerpPotentialFit: normal matrix factorization failed", 0.0, 0);
}

PerpPotentialFit::~PerpPotentialFit() = default;

ScalarField PerpPotentialFit::fit(const VecField& v, double* defect_l2) const {
  const Impl& im = *impl_;
  const DiskGrid& g = *im.g;
  const int m = static_cast<int>(im.nodes.size()) - 1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (const Impl::Row& row : im.rows) {
    const double w = im.fit_w[row.node];
    const double val = (row.axis == 0) ? v.x[row.node] : v.y[row.node];
    for (int a = 0; a < row.count; ++a) {
      const int ua = im.unknown[row.target[a]];
      if (ua >= 0) b[ua] += w * row.c[a] * val;
    }
  }
  const Eigen::VectorXd x = im.chol.solve(b);
  if (im.chol.info() != Eigen::Success)
    throw SolveError("PerpPotentialFit: triangular solve failed", 0.0, 0);

  ScalarField e(g);
  for (int idx : im.nodes) {
    const int u = im.unknown[idx];
    e[idx] = (u < 0) ? 0.0 : x[u];
  }
  // quadrature-mean-zero representative
  double mass = 0.0, mean = 0.0;
  for (int idx : im.nodes) {
    mass += g.quad_weight(idx);
    mean += g.quad_weight(idx) * e[idx];
  }
  mean /= mass;
  for (int idx : im.nodes) e[idx] -= mean;

  if (defect_l2 != nullptr) {
    double j2 = 0.0;
    for (const Impl::Row& row : im.rows) {
      double s = 0.0;
      for (int a = 0; a < row.count; ++a) s += row.c[a] * e[row.target[a]];
      const double val = (row.axis == 0) ? v.x[row.node] : v.y[row.node];
      const double d = s - val;
      j2 += im.fit_w[row.node] * d * d;
    }
    *defect_l2 = std::sqrt(j2);
  }
  return e;
}

HodgeData hodge_decompose(const std::vector<VecField>& v) {
  if (v.empty()) throw std::invalid_argument("hodge_decompose: empty input");
  const DiskGrid& g = v.front().grid();
  const int k = static_cast<int>(v.size());
  const PerpPotentialFit fitter(g);
  HodgeData out;
  out.d = MapField(g, k);
  out.e = MapField(g, k);
  double res2 = 0.0;
  for (int c = 0; c < k; ++c) {
    // div V = Laplacian d (the rotational part is divergence-free); what
    // grad d misses is divergence-free, so it has a fitted potential.
    out.d.component(c) = solve_dirichlet(divergence(v[c]));
    const VecField gd = grad(out.d.component(c));
    VecField rem(g);
    for (size_t idx = 0; idx < rem.x.data().size(); ++idx) {
      if (g.quad_weight(static_cast<int>(idx)) == 0.0) continue;
      rem.set(static_cast<int>(idx),
              v[c].at(static_cast<int>(idx)) - gd.at(static_cast<int>(idx)));
    }
    double defect = 0.0;
    out.e.component(c) = fitter.fit(rem, &defect);
    res2 += defect * defect;
  }
  out.residual = std::sqrt(res2);
  return out;
}

HodgeData hodge_decompose(const VecField& v) {
  return hodge_decompose(std::vector<VecField>{v});
}

}  // namespace disklab
