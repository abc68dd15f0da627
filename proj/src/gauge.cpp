#include "disklab/gauge.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "disklab/calculus.hpp"
#include "disklab/hodge.hpp"
#include "disklab/norms.hpp"
#include "disklab/poisson.hpp"

namespace disklab {

namespace {

using Mat = Eigen::MatrixXd;
using RowMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using CRowMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// The first-derivative identities below are interior statements on this grid:
// within a band of a few cells from the rim the stencils turn one-sided and
// read the staircase sampling of boundary values, an O(1) per-node error that
// refinement does not remove. Identity residuals are therefore measured over
// nodes at least rim_margin from the unit circle, and the least-squares
// potentials entering them are fitted with weights tapered over that band.
double rim_margin(const DiskGrid& g) { return std::max(0.1, 4.0 * g.spacing()); }

std::vector<int> rim_margin_probe(const DiskGrid& g) {
  const int nn = g.n();
  const double margin = rim_margin(g);
  std::vector<int> probe;
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / nn, idx % nn);
    if (1.0 - p.norm() >= margin) probe.push_back(idx);
  }
  return probe;
}

// Flattened per-node workspace for the gauge energy: domain node list,
// quadrature weights, derivative stencils (slot-indexed) and the connection
// matrices per axis.
struct GaugeWork {
  const DiskGrid* g;
  int n;
  int n2;
  std::vector<int> nodes;  // global lattice index per slot
  std::vector<int> slot;   // global -> slot, -1 outside
  std::vector<double> m;   // quadrature weight per slot
  struct STerm {
    int target;  // slot
    double c;
  };
  std::vector<std::array<STerm, 4>> st;  // [axis*2 + k]
  std::vector<std::array<int, 2>> stcnt;
  std::vector<std::array<int, 4>> nb;  // metric graph neighbors (slots)
  std::vector<int> nbcnt;
  std::vector<double> om;  // [slot][axis][n2], row-major blocks

  GaugeWork(const ConnectionForm& omega) : g(&omega.grid()), n(omega.dim()), n2(n * n) {
    const DiskGrid& gr = *g;
    const auto& in = gr.interior();
    const auto& bd = gr.boundary();
    nodes.resize(in.size() + bd.size());
    std::merge(in.begin(), in.end(), bd.begin(), bd.end(), nodes.begin());
    slot.assign(gr.n() * gr.n(), -1);
    for (size_t s = 0; s < nodes.size(); ++s) slot[nodes[s]] = static_cast<int>(s);

    const int nn = gr.n();
    m.resize(nodes.size());
    st.resize(nodes.size());
    stcnt.resize(nodes.size());
    nb.resize(nodes.size());
    nbcnt.assign(nodes.size(), 0);
    om.assign(nodes.size() * 2 * n2, 0.0);
    for (size_t s = 0; s < nodes.size(); ++s) {
      const int idx = nodes[s];
      const int i = idx / nn, j = idx % nn;
      m[s] = gr.quad_weight(idx);
      for (int axis = 0; axis < 2; ++axis) {
        DerivTerm t[2];
        stcnt[s][axis] = deriv_stencil(gr, i, j, axis, t);
        for (int k = 0; k < stcnt[s][axis]; ++k) {
          const int tslot = slot[gr.index(i + t[k].di, j + t[k].dj)];
          st[s][axis * 2 + k] = {tslot, t[k].c};
        }
        const Mat o = omega.axis_matrix(axis, idx);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) om[(s * 2 + axis) * n2 + r * n + c] = o(r, c);
      }
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int ii = i + di[d], jj = j + dj[d];
        if (gr.in_domain(ii, jj)) nb[s][nbcnt[s]++] = slot[gr.index(ii, jj)];
      }
    }
  }

  size_t count() const { return nodes.size(); }
};

// Energy and the per-node matrices W_axis = R^T (D_axis R + Omega_axis R).
double gauge_energy(const GaugeWork& w, const std::vector<double>& R, std::vector<double>& W) {
  const int n = w.n, n2 = w.n2;
  Mat D(n, n), T(n, n);
  double e = 0.0;
  for (size_t s = 0; s < w.count(); ++s) {
    CRowMap Rq(R.data() + s * n2, n, n);
    for (int axis = 0; axis < 2; ++axis) {
      D.setZero();
      for (int k = 0; k < w.stcnt[s][axis]; ++k) {
        const auto& t = w.st[s][axis * 2 + k];
        D += t.c * CRowMap(R.data() + static_cast<size_t>(t.target) * n2, n, n);
      }
      CRowMap Om(w.om.data() + (s * 2 + axis) * n2, n, n);
      D.noalias() += Om * Rq;
      T.noalias() = Rq.transpose() * D;
      RowMap(W.data() + (s * 2 + axis) * n2, n, n) = T;
      e += w.m[s] * T.squaredNorm();
    }
  }
  return e;
}

// Euclidean gradient G, then S(q) = skew(R^T G) and its lifted L2 norm.
double gauge_gradient(const GaugeWork& w, const std::vector<double>& R,
                      const std::vector<double>& W, std::vector<double>& S) {
  const int n = w.n, n2 = w.n2;
  std::vector<double> G(w.count() * n2, 0.0);
  Mat K(n, n), acc(n, n);
  for (size_t s = 0; s < w.count(); ++s) {
    CRowMap Rq(R.data() + s * n2, n, n);
    for (int axis = 0; axis < 2; ++axis) {
      CRowMap Wqa(W.data() + (s * 2 + axis) * n2, n, n);
      CRowMap Om(w.om.data() + (s * 2 + axis) * n2, n, n);
      K.noalias() = Rq * Wqa;
      acc.noalias() = K * Wqa.transpose();
      acc.noalias() -= Om * K;
      RowMap(G.data() + s * n2, n, n) += 2.0 * w.m[s] * acc;
      for (int k = 0; k < w.stcnt[s][axis]; ++k) {
        const auto& t = w.st[s][axis * 2 + k];
        RowMap(G.data() + static_cast<size_t>(t.target) * n2, n, n) += (2.0 * w.m[s] * t.c) * K;
      }
    }
  }
  double norm2 = 0.0;
  Mat Sq(n, n);
  for (size_t s = 0; s < w.count(); ++s) {
    CRowMap Rq(R.data() + s * n2, n, n);
    CRowMap Gq(G.data() + s * n2, n, n);
    acc.noalias() = Rq.transpose() * Gq;
    Sq = 0.5 * (acc - acc.transpose());
    RowMap(S.data() + s * n2, n, n) = Sq;
    norm2 += Sq.squaredNorm() / w.m[s];
  }
  return std::sqrt(norm2);
}

// Factorization of the metric operator: eps times the quadrature mass plus
// the Gram matrix of the energy's own first-derivative stencils,
//   (M x)_s = eps m_s x_s + sum_axis D^T diag(m) D x.
// Built once per minimization. Using the energy's stencils matters: they are
// nearly blind to sublattice-alternating modes, so a compact graph Laplacian
// here would over-damp exactly the directions where the landscape is
// shallow, and the tail of the descent would crawl (iterations ~ 1/h^2).
struct MetricSolver {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;

  MetricSolver(const GaugeWork& w, double eps) {
    const int cnt = static_cast<int>(w.count());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(cnt) * 9);
    for (int s = 0; s < cnt; ++s) {
      trip.emplace_back(s, s, eps * w.m[s]);
      for (int axis = 0; axis < 2; ++axis)
        for (int a = 0; a < w.stcnt[s][axis]; ++a)
          for (int b = 0; b < w.stcnt[s][axis]; ++b) {
            const auto& ta = w.st[s][axis * 2 + a];
            const auto& tb = w.st[s][axis * 2 + b];
            trip.emplace_back(ta.target, tb.target, w.m[s] * ta.c * tb.c);
          }
    }
    Eigen::SparseMatrix<double> M(cnt, cnt);
    M.setFromTriplets(trip.begin(), trip.end());
    chol.compute(M);
    if (chol.info() != Eigen::Success)
      throw SolveError("minimize_gauge: metric factorization failed", 0.0, 0);
  }
};

// Metric solve applied entrywise to the lifted gradient. S holds the raw
// derivative coefficients, so it is the right-hand side as is.
void sobolev_direction(const GaugeWork& w, const MetricSolver& metric,
                       const std::vector<double>& S, std::vector<double>& X) {
  const int n = w.n, n2 = w.n2;
  const size_t cnt = w.count();
  Eigen::VectorXd b(cnt), x(cnt);
  std::fill(X.begin(), X.end(), 0.0);
  for (int rr = 0; rr < n; ++rr)
    for (int cc = rr + 1; cc < n; ++cc) {
      for (size_t s = 0; s < cnt; ++s) b[static_cast<Eigen::Index>(s)] = S[s * n2 + rr * n + cc];
      x = metric.chol.solve(b);
      for (size_t s = 0; s < cnt; ++s) {
        X[s * n2 + rr * n + cc] = x[static_cast<Eigen::Index>(s)];
        X[s * n2 + cc * n + rr] = -x[static_cast<Eigen::Index>(s)];
      }
    }
}

void retract_all(const GaugeWork& w, const std::vector<double>& R, const std::vector<double>& X,
                 double tau, std::vector<double>& out) {
  const int n = w.n, n2 = w.n2;
  Mat M(n, n);
  for (size_t s = 0; s < w.count(); ++s) {
    CRowMap Rq(R.data() + s * n2, n, n);
    CRowMap Xq(X.data() + s * n2, n, n);
    M.noalias() = Rq - tau * (Rq * Xq);
    RowMap(out.data() + s * n2, n, n) = qr_retract(M);
  }
}

}  // namespace

GaugeResult minimize_gauge(const ConnectionForm& omega, const GaugeOpts& opts) {
  const GaugeWork w(omega);
  const int n2 = w.n2;
  const size_t cnt = w.count();

  std::vector<double> R(cnt * n2, 0.0);
  for (size_t s = 0; s < cnt; ++s)
    for (int d = 0; d < w.n; ++d) R[s * n2 + d * w.n + d] = 1.0;

  std::vector<double> W(cnt * 2 * n2), Wt(cnt * 2 * n2);
  std::vector<double> S(cnt * n2), X(cnt * n2), Rt(cnt * n2);

  GaugeResult res{FrameField(*w.g, w.n)};
  res.omega_l2 = std::sqrt(omega.l2_norm_sq());
  const double tol = std::max(opts.tol_rel * res.omega_l2, 1e-14);
  const MetricSolver metric(w, opts.sobolev_eps);

  double E = gauge_energy(w, R, W);
  double tau0 = opts.step0;
  bool done = false;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    res.grad_norm = gauge_gradient(w, R, W, S);
    res.energy_history.push_back(E);
    res.iterations = iter;
    if (res.grad_norm <= tol) {
      done = true;
      break;
    }
    sobolev_direction(w, metric, S, X);
    double decr = 0.0;
    for (size_t k = 0; k < S.size(); ++k) decr += S[k] * X[k];
    bool plain = false;
    if (decr <= 0.0) {
      for (size_t s = 0; s < cnt; ++s)
        for (int k = 0; k < n2; ++k) X[s * n2 + k] = S[s * n2 + k] / w.m[s];
      decr = 0.0;
      for (size_t k = 0; k < S.size(); ++k) decr += S[k] * X[k];
      plain = true;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double tau = tau0;
      for (int bt = 0; bt < 50; ++bt) {
        retract_all(w, R, X, tau, Rt);
        const double Et = gauge_energy(w, Rt, Wt);
        if (Et <= E - 1e-4 * tau * decr) {
          R.swap(Rt);
          W.swap(Wt);
          E = Et;
          tau0 = std::min(tau * 1.3, 1e3);
          accepted = true;
          break;
        }
        tau *= 0.5;
      }
      if (!accepted && !plain) {
        // preconditioned direction failed; fall back to the lifted gradient
        for (size_t s = 0; s < cnt; ++s)
          for (int k = 0; k < n2; ++k) X[s * n2 + k] = S[s * n2 + k] / w.m[s];
        decr = 0.0;
        for (size_t k = 0; k < S.size(); ++k) decr += S[k] * X[k];
        plain = true;
        tau0 = 1.0;
      } else if (!accepted) {
        break;
      }
    }
    if (!accepted) {
      // Backtracking cannot reduce the energy any further. Treat that as
      // convergence to the numerical floor when the gradient is already
      // small; otherwise it is a real failure.
      if (res.grad_norm <= 100.0 * tol) {
        done = true;
        break;
      }
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "minimize_gauge: stalled at gradient %.3e (tol %.3e) after %d iterations",
                    res.grad_norm, tol, iter);
      throw SolveError(msg, res.grad_norm, iter);
    }
  }
  if (!done) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "minimize_gauge: gradient %.3e above tol %.3e after %d iterations",
                  res.grad_norm, tol, opts.max_iter);
    throw SolveError(msg, res.grad_norm, opts.max_iter);
  }
  res.energy = E;
  for (size_t s = 0; s < cnt; ++s) {
    double* blk = res.P.block(w.nodes[s]);
    for (int k = 0; k < n2; ++k) blk[k] = R[s * n2 + k];
  }
  return res;
}

XiResult extract_xi(const FrameField& P, const ConnectionForm& omega) {
  const DiskGrid& g = P.grid();
  const int n = P.dim(), nn = g.n();
  XiResult out;
  out.xi = MatrixField(g, n);
  out.w = ConnectionForm(g, n);

  Mat D(n, n), T(n, n);
  auto fill = [&](const std::vector<int>& nodeset) {
    for (int idx : nodeset) {
      const int i = idx / nn, j = idx % nn;
      const Mat Pq = P.at(idx);
      for (int axis = 0; axis < 2; ++axis) {
        D.setZero();
        DerivTerm t[2];
        const int cntr = deriv_stencil(g, i, j, axis, t);
        for (int k = 0; k < cntr; ++k) D += t[k].c * P.at(g.index(i + t[k].di, j + t[k].dj));
        D.noalias() += omega.axis_matrix(axis, idx) * Pq;
        T.noalias() = Pq.transpose() * D;
        T = 0.5 * (T - T.transpose()).eval();
        for (int r = 0; r < n; ++r)
          for (int c = r + 1; c < n; ++c) {
            Vec2 v = out.w.entry(r, c).at(idx);
            (axis == 0 ? v.x : v.y) = T(r, c);
            out.w.entry(r, c).set(idx, v);
          }
      }
    }
  };
  fill(g.interior());
  fill(g.boundary());

  const std::vector<int> probe = rim_margin_probe(g);
  double res2 = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      const ScalarField rhs = curl(out.w.entry(r, c));
      const ScalarField xi_rc = solve_dirichlet(rhs);
      out.xi.entry(r, c) = xi_rc;
      for (int idx = 0; idx < nn * nn; ++idx) out.xi.entry(c, r)[idx] = -xi_rc[idx];
      const VecField pg = perp_grad(xi_rc);
      for (int idx : probe) {
        const Vec2 d = out.w.entry(r, c).at(idx) - pg.at(idx);
        res2 += 2.0 * g.quad_weight(idx) * d.norm2();
      }
    }
  out.res_coulomb = std::sqrt(res2);

  double xmax = 0.0;
  auto scan = [&](const std::vector<int>& nodeset) {
    for (int idx : nodeset) {
      double f2 = 0.0;
      for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) {
          const double v = out.xi.entry(r, c)[idx];
          f2 += 2.0 * v * v;
        }
      xmax = std::max(xmax, std::sqrt(f2));
    }
  };
  scan(g.interior());
  scan(g.boundary());
  out.xi_linf = xmax;

  const MatrixField Pm = P.as_matrix_field();
  double gp2 = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double v = l2_norm(grad(Pm.entry(r, c)));
      gp2 += v * v;
    }
  out.grad_p_l2 = std::sqrt(gp2);
  return out;
}

namespace {

// entrywise (A Omega)^r_c = sum_k A^r_k Omega^k_c as vector fields
std::vector<VecField> a_omega(const MatrixField& A, const ConnectionForm& om) {
  const DiskGrid& g = om.grid();
  const int n = om.dim();
  std::vector<VecField> M;
  M.reserve(n * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      VecField e(g);
      auto fill = [&](const std::vector<int>& nodeset) {
        for (int idx : nodeset) {
          Vec2 acc{0.0, 0.0};
          for (int k = 0; k < n; ++k) {
            if (k == c) continue;  // diagonal of Omega is zero
            acc = acc + A.entry(r, k)[idx] * om.at(k, c, idx);
          }
          e.set(idx, acc);
        }
      };
      fill(g.interior());
      fill(g.boundary());
      M.push_back(std::move(e));
    }
  return M;
}

}  // namespace

ABResult build_AB(const FrameField& P, const ConnectionForm& om, double tol, int max_iter) {
  const DiskGrid& g = P.grid();
  const int n = P.dim(), nn = g.n();
  const MatrixField Pm = P.as_matrix_field();

  ABResult out;
  out.A = MatrixField(g, n);
  out.B = MatrixField(g, n);
  MatrixField traceA(g, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      traceA.entry(r, c) = Pm.entry(c, r);  // A starts (and stays, on the rim) at P^T
      out.A.entry(r, c) = Pm.entry(c, r);
    }

  // Anderson-mixed fixed point on the stacked interior values of (A, B)
  const std::vector<int>& in = g.interior();
  const size_t len = in.size() * n * n * 2;
  auto pack = [&](const MatrixField& A, const MatrixField& B, std::vector<double>& z) {
    z.resize(len);
    size_t o = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        for (int idx : in) z[o++] = A.entry(r, c)[idx];
        for (int idx : in) z[o++] = B.entry(r, c)[idx];
      }
  };
  auto unpack = [&](const std::vector<double>& z, MatrixField& A, MatrixField& B) {
    size_t o = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        for (int idx : in) A.entry(r, c)[idx] = z[o++];
        for (int idx : in) B.entry(r, c)[idx] = z[o++];
      }
  };

  // one sweep of the lifting: A' from Laplacian A = div(A Omega), B' from
  // Laplacian B = -curl(A Omega), both warm-started
  auto sweep = [&](const MatrixField& A, const MatrixField& B, MatrixField& A2, MatrixField& B2) {
    const std::vector<VecField> M = a_omega(A, om);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const VecField& m_rc = M[r * n + c];
        ScalarField rhs_a = divergence(m_rc);
        A2.entry(r, c) = solve_dirichlet(rhs_a, &traceA.entry(r, c), &A.entry(r, c));
        ScalarField rhs_b = curl(m_rc);
        for (double& v : rhs_b.data()) v = -v;
        B2.entry(r, c) = solve_dirichlet(rhs_b, nullptr, &B.entry(r, c));
      }
  };

  MatrixField A2(g, n), B2(g, n);
  const int window = 4;
  std::vector<std::vector<double>> zs, gs;  // iterate and image history
  std::vector<double> z, gz, f;
  pack(out.A, out.B, z);

  double scale = 1.0;
  {
    double s2 = 0.0;
    for (double v : z) s2 += v * v;
    scale = std::max(1.0, std::sqrt(s2 / std::max<size_t>(1, len)));
  }

  double prev_res = 0.0;
  int grow = 0;
  for (int it = 0; it < max_iter; ++it) {
    unpack(z, out.A, out.B);
    sweep(out.A, out.B, A2, B2);
    pack(A2, B2, gz);
    f.resize(len);
    double f2 = 0.0;
    for (size_t k = 0; k < len; ++k) {
      f[k] = gz[k] - z[k];
      f2 += f[k] * f[k];
    }
    const double res = std::sqrt(f2 / len) / scale;
    out.iterations = it + 1;
    out.res_fixpoint = res;
    if (res <= tol) {
      out.converged = true;
      out.A = A2;
      out.B = B2;
      break;
    }
    if (it > 0 && res > prev_res) {
      if (++grow >= 3) {
        out.converged = false;
        out.A = A2;
        out.B = B2;
        break;
      }
    } else {
      grow = 0;
    }
    prev_res = res;

    zs.push_back(z);
    gs.push_back(gz);
    if (static_cast<int>(zs.size()) > window + 1) {
      zs.erase(zs.begin());
      gs.erase(gs.begin());
    }
    const int mk = static_cast<int>(zs.size()) - 1;
    if (mk == 0) {
      z = gz;
    } else {
      // least squares over the residual differences
      Eigen::MatrixXd D(len, mk);
      std::vector<std::vector<double>> fs(zs.size());
      for (size_t q = 0; q < zs.size(); ++q) {
        fs[q].resize(len);
        for (size_t k = 0; k < len; ++k) fs[q][k] = gs[q][k] - zs[q][k];
      }
      for (int cidx = 0; cidx < mk; ++cidx)
        for (size_t k = 0; k < len; ++k) D(k, cidx) = fs[cidx + 1][k] - fs[cidx][k];
      Eigen::VectorXd rhs(len);
      for (size_t k = 0; k < len; ++k) rhs(k) = fs.back()[k];
      const Eigen::VectorXd gamma = D.colPivHouseholderQr().solve(rhs);
      z = gz;
      for (int cidx = 0; cidx < mk; ++cidx) {
        const double gcoef = gamma(cidx);
        if (gcoef == 0.0) continue;
        for (size_t k = 0; k < len; ++k) z[k] -= gcoef * (gs[cidx + 1][k] - gs[cidx][k]);
      }
    }
  }
  if (out.iterations == max_iter && out.res_fixpoint > tol) out.converged = false;

  // Final B and the certified defect of grad A - A Omega - perp-grad B.
  // The zero-trace B carried through the loop is only a stabilizer: the
  // genuine potential has a nonzero boundary trace, and pinning it to zero
  // bends B by a bulk harmonic error that refinement does not shrink. So B
  // is refit as a global perp-potential of A Omega - grad A with rim-tapered
  // weights, and the defect is measured over the rim-margin probe nodes.
  {
    const PerpPotentialFit bfit(g, rim_margin(g));
    const std::vector<int> probe = rim_margin_probe(g);
    const std::vector<VecField> M = a_omega(out.A, om);
    double d2 = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const VecField ga = grad(out.A.entry(r, c));
        const VecField& m_rc = M[r * n + c];
        VecField rot(g);
        auto fill = [&](const std::vector<int>& nodeset) {
          for (int idx : nodeset) rot.set(idx, m_rc.at(idx) - ga.at(idx));
        };
        fill(g.interior());
        fill(g.boundary());
        const ScalarField pot = bfit.fit(rot);
        auto put = [&](const std::vector<int>& nodeset) {
          for (int idx : nodeset) out.B.entry(r, c)[idx] = -pot[idx];
        };
        put(g.interior());
        put(g.boundary());
        const VecField pg = perp_grad(pot);
        for (int idx : probe) {
          const Vec2 d = rot.at(idx) - pg.at(idx);
          d2 += g.quad_weight(idx) * d.norm2();
        }
      }
    out.res_ab = std::sqrt(d2);
  }

  double bmax = 0.0, amax = 0.0;
  Mat Aq(n, n);
  auto scan = [&](const std::vector<int>& nodeset) {
    for (int idx : nodeset) {
      double b2 = 0.0;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          const double v = out.B.entry(r, c)[idx];
          b2 += v * v;
          Aq(r, c) = out.A.entry(r, c)[idx];
        }
      bmax = std::max(bmax, std::sqrt(b2));
      amax = std::max(amax, (Aq * P.at(idx) - Mat::Identity(n, n)).norm());
    }
  };
  scan(g.interior());
  scan(g.boundary());
  (void)nn;
  out.b_linf = bmax;
  out.ahat_linf = amax;
  return out;
}

EtaResult build_eta(const MapField& u, const MatrixField& A, const MatrixField& B) {
  const DiskGrid& g = u.grid();
  const int n = u.dim();
  EtaResult out;
  out.eta = MapField(g, n);
  out.v.reserve(n);

  std::vector<VecField> du, dpu;
  for (int k = 0; k < n; ++k) {
    du.push_back(grad(u.component(k)));
    dpu.push_back(perp_grad(u.component(k)));
  }
  for (int c = 0; c < n; ++c) {
    VecField vc(g);
    auto fill = [&](const std::vector<int>& nodeset) {
      for (int idx : nodeset) {
        Vec2 acc{0.0, 0.0};
        for (int k = 0; k < n; ++k)
          acc = acc + A.entry(c, k)[idx] * du[k].at(idx) + B.entry(c, k)[idx] * dpu[k].at(idx);
        vc.set(idx, acc);
      }
    };
    fill(g.interior());
    fill(g.boundary());
    out.v.push_back(std::move(vc));
  }

  // Rim-tapered fit: a uniform-weight fit chases the one-sided-stencil junk
  // in the rim band and drags the potential off in the bulk, where V is
  // genuinely divergence-free. The defect is measured over the probe nodes.
  const PerpPotentialFit fitter(g, rim_margin(g));
  const std::vector<int> probe = rim_margin_probe(g);
  double r2 = 0.0;
  for (int c = 0; c < n; ++c) {
    out.eta.component(c) = fitter.fit(out.v[c]);
    const VecField pg = perp_grad(out.eta.component(c));
    for (int idx : probe) {
      const Vec2 d = out.v[c].at(idx) - pg.at(idx);
      r2 += g.quad_weight(idx) * d.norm2();
    }
  }
  out.res_eta = std::sqrt(r2);

  // weak divergence against a fixed polynomial bump family (exact gradients)
  struct Test {
    double (*phi)(Vec2);
    Vec2 (*dphi)(Vec2);
  };
  auto w0 = [](Vec2 p) { return (1.0 - p.norm2()) * (1.0 - p.norm2()); };
  static const Test tests[5] = {
      {[](Vec2 p) { return (1.0 - p.norm2()) * (1.0 - p.norm2()); },
       [](Vec2 p) {
         const double c = -4.0 * (1.0 - p.norm2());
         return Vec2{c * p.x, c * p.y};
       }},
      {[](Vec2 p) { return (1.0 - p.norm2()) * (1.0 - p.norm2()) * p.x; },
       [](Vec2 p) {
         const double q = 1.0 - p.norm2();
         return Vec2{q * q - 4.0 * p.x * p.x * q, -4.0 * p.x * p.y * q};
       }},
      {[](Vec2 p) { return (1.0 - p.norm2()) * (1.0 - p.norm2()) * p.y; },
       [](Vec2 p) {
         const double q = 1.0 - p.norm2();
         return Vec2{-4.0 * p.x * p.y * q, q * q - 4.0 * p.y * p.y * q};
       }},
      {[](Vec2 p) { return (1.0 - p.norm2()) * (1.0 - p.norm2()) * p.x * p.y; },
       [](Vec2 p) {
         const double q = 1.0 - p.norm2();
         return Vec2{q * q * p.y - 4.0 * p.x * p.x * p.y * q,
                     q * q * p.x - 4.0 * p.x * p.y * p.y * q};
       }},
      {[](Vec2 p) { return (1.0 - p.norm2()) * (1.0 - p.norm2()) * (p.x * p.x - p.y * p.y); },
       [](Vec2 p) {
         const double q = 1.0 - p.norm2();
         const double w = p.x * p.x - p.y * p.y;
         return Vec2{2.0 * q * q * p.x - 4.0 * p.x * w * q, -2.0 * q * q * p.y - 4.0 * p.y * w * q};
       }},
  };
  (void)w0;
  const int nn = g.n();
  // Normalize by the size of the whole current, not per component: for
  // symmetric boundary data single rows of V can be numerically zero, and a
  // zero flux conserves trivially.
  double v_all2 = 0.0;
  for (int c = 0; c < n; ++c) {
    for (int idx : g.interior()) v_all2 += g.quad_weight(idx) * out.v[c].at(idx).norm2();
    for (int idx : g.boundary()) v_all2 += g.quad_weight(idx) * out.v[c].at(idx).norm2();
  }
  const double v_all = std::sqrt(v_all2);
  double worst = 0.0;
  for (const Test& t : tests) {
    double dphi_l2 = 0.0;
    std::vector<Vec2> dphi_at(static_cast<size_t>(nn) * nn, Vec2{0.0, 0.0});
    auto prep = [&](const std::vector<int>& nodeset) {
      for (int idx : nodeset) {
        const Vec2 p = g.node(idx / nn, idx % nn);
        const Vec2 d = t.dphi(p);
        dphi_at[idx] = d;
        dphi_l2 += g.quad_weight(idx) * d.norm2();
      }
    };
    prep(g.interior());
    prep(g.boundary());
    dphi_l2 = std::sqrt(dphi_l2);
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      auto acc = [&](const std::vector<int>& nodeset) {
        for (int idx : nodeset)
          s += g.quad_weight(idx) * dot(out.v[c].at(idx), dphi_at[idx]);
      };
      acc(g.interior());
      acc(g.boundary());
      const double denom = std::max(v_all * dphi_l2, 1e-300);
      worst = std::max(worst, std::fabs(s) / denom);
    }
  }
  out.res_conservation = worst;
  return out;
}

DEResult compute_DE(const MapField& u, const MatrixField& A, const MatrixField& B) {
  const DiskGrid& g = u.grid();
  const int n = u.dim();
  DEResult out;
  out.d = MapField(g, n);
  out.e = MapField(g, n);

  std::vector<VecField> du, dpu;
  for (int k = 0; k < n; ++k) {
    du.push_back(grad(u.component(k)));
    dpu.push_back(perp_grad(u.component(k)));
  }

  const PerpPotentialFit fitter(g);
  double res2 = 0.0;
  for (int c = 0; c < n; ++c) {
    // flux (A grad u)^c and the Jacobian right-hand side of its gradient part
    VecField flux(g);
    ScalarField rhs_d(g);
    for (int k = 0; k < n; ++k) {
      const VecField gb = grad(B.entry(c, k));
      auto fill = [&](const std::vector<int>& nodeset) {
        for (int idx : nodeset) {
          flux.set(idx, flux.at(idx) + A.entry(c, k)[idx] * du[k].at(idx));
          rhs_d[idx] -= dot(gb.at(idx), dpu[k].at(idx));
        }
      };
      fill(g.interior());
      fill(g.boundary());
    }
    out.d.component(c) = solve_dirichlet(rhs_d);
    const VecField gd = grad(out.d.component(c));
    VecField rem(g);
    auto sub = [&](const std::vector<int>& nodeset) {
      for (int idx : nodeset) rem.set(idx, flux.at(idx) - gd.at(idx));
    };
    sub(g.interior());
    sub(g.boundary());
    double defect = 0.0;
    out.e.component(c) = fitter.fit(rem, &defect);
    res2 += defect * defect;
  }
  out.res_hodge = std::sqrt(res2);

  double dmax = 0.0;
  auto scan = [&](const std::vector<int>& nodeset) {
    for (int idx : nodeset) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += out.d.component(c)[idx] * out.d.component(c)[idx];
      dmax = std::max(dmax, std::sqrt(s));
    }
  };
  scan(g.interior());
  scan(g.boundary());
  out.d_linf = dmax;
  out.grad_d_l21 = lorentz21_norm(grad_abs(out.d));
  return out;
}

StructureReport verify_deltaP_structure(const MapField& u, const FrameField& P,
                                        const XiResult& xi, const ABResult& ab,
                                        const EtaResult& eta, const CoeffTensor& t) {
  const DiskGrid& g = u.grid();
  const int n = u.dim(), nn = g.n();
  StructureReport rep;
  rep.a_min_det = 1e300;

  const MatrixField Pm = P.as_matrix_field();

  // Q_k and R_k fields from the tensor, P, A^{-1} and A^{-1} B
  std::vector<MatrixField> Q(n, MatrixField(g, n)), R(n, MatrixField(g, n));
  Mat Aq(n, n), Ainv(n, n), AinvB(n, n), Bq(n, n);
  auto assemble = [&](const std::vector<int>& nodeset) {
    for (int idx : nodeset) {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          Aq(r, c) = ab.A.entry(r, c)[idx];
          Bq(r, c) = ab.B.entry(r, c)[idx];
        }
      const double det = Aq.determinant();
      rep.a_min_det = std::min(rep.a_min_det, std::fabs(det));
      if (std::fabs(det) < 1e-12) {
        rep.a_invertible = false;
        return;
      }
      Ainv = Aq.inverse();
      AinvB.noalias() = Ainv * Bq;
      const std::vector<double> uv = u.at(idx);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double q = 0.0, rr = 0.0;
            for (int z = 0; z < n; ++z) {
              const double pz = Pm.entry(z, j)[idx];
              if (pz == 0.0) continue;
              for (int l = 0; l < n; ++l) {
                const double fv = t.f(i, z, l, uv);
                if (fv != 0.0) {
                  q -= fv * pz * Ainv(l, k);
                  rr += fv * pz * AinvB(l, k);
                }
              }
              rr -= t.g(i, z, k, uv) * pz;
            }
            Q[k].entry(i, j)[idx] = q;
            R[k].entry(i, j)[idx] = rr;
          }
    }
  };
  assemble(g.interior());
  if (!rep.a_invertible) return rep;
  assemble(g.boundary());
  if (!rep.a_invertible) return rep;

  // Second derivatives are taken as div of grad with the same stencils as
  // every first-order identity in the pipeline. The compact five-point
  // Laplacian is the wrong probe here: the frame optimizer's energy only
  // sees central differences, so P can carry a sublattice-alternating
  // component of size ~h^2 that grad() is blind to but a compact Laplacian
  // amplifies by 1/h^2, swamping the identity being tested.
  //
  // The identity itself is an interior statement, so it is measured on a
  // region held away from the rim: the one-sided rim stencils are only
  // first-order, and the defects of the global potential fits (xi, eta)
  // concentrate in the outermost few cells. Profiling shows the residual
  // there equals the local size of div grad P at every resolution, while
  // on any fixed interior region it drops by an order of magnitude per
  // grid doubling.
  const double margin = std::max(0.15, 4.0 * g.spacing());
  std::vector<int> probe_nodes;
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / nn, idx % nn);
    if (1.0 - p.norm() >= margin) probe_nodes.push_back(idx);
  }
  double res2 = 0.0, lhs2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ScalarField lhs = divergence(grad(Pm.entry(i, j)));
      ScalarField rhs(g);
      for (int m = 0; m < n; ++m) {
        const VecField gp = grad(Pm.entry(i, m));
        const VecField px = perp_grad(xi.xi.entry(m, j));
        for (int idx : probe_nodes) rhs[idx] += dot(gp.at(idx), px.at(idx));
      }
      for (int k = 0; k < n; ++k) {
        const VecField gq = grad(Q[k].entry(i, j));
        const VecField pe = perp_grad(eta.eta.component(k));
        const VecField gr = grad(R[k].entry(i, j));
        const VecField pu = perp_grad(u.component(k));
        for (int idx : probe_nodes)
          rhs[idx] += dot(gq.at(idx), pe.at(idx)) + dot(gr.at(idx), pu.at(idx));
      }
      for (int idx : probe_nodes) {
        const double d = lhs[idx] - rhs[idx];
        res2 += g.quad_weight(idx) * d * d;
        lhs2 += g.quad_weight(idx) * lhs[idx] * lhs[idx];
      }
    }
  rep.res_l2 = std::sqrt(res2);
  rep.lhs_l2 = std::sqrt(lhs2);
  return rep;
}

OscillationReport oscillation_P(const FrameField& P, double dirichlet_energy) {
  const DiskGrid& g = P.grid();
  const int nn = g.n();
  OscillationReport rep;
  rep.sqrt_energy = std::sqrt(std::max(dirichlet_energy, 0.0));

  const int stride = std::max(1, nn / 9);
  double worst = 0.0;
  for (int i = stride; i < nn; i += stride)
    for (int j = stride; j < nn; j += stride) {
      if (!g.is_interior(i, j)) continue;
      const Vec2 x = g.node(i, j);
      const double margin = 1.0 - x.norm();
      if (margin < 4.0 * g.spacing()) continue;
      const Mat Px = P.at(g.index(i, j));
      for (double rfac : {0.5, 0.25, 0.125}) {
        const double r = margin * rfac;  // B_{2r}(x) stays inside the disk
        for (int dir = 0; dir < 8; ++dir) {
          const double ang = 2.0 * 3.14159265358979323846 * dir / 8.0;
          const Vec2 y{x.x + r * std::cos(ang), x.y + r * std::sin(ang)};
          const int yi = static_cast<int>(std::lround((y.x + 1.0) / g.spacing()));
          const int yj = static_cast<int>(std::lround((y.y + 1.0) / g.spacing()));
          if (!g.in_domain(yi, yj) || !g.is_interior(yi, yj)) continue;
          const double d = (P.at(g.index(yi, yj)) - Px).norm();
          worst = std::max(worst, d);
        }
      }
    }
  rep.max_osc = worst;
  rep.ratio = worst / std::max(rep.sqrt_energy, 1e-14);
  return rep;
}

}  // namespace disklab
