#include "disklab/scan.hpp"

#include <cmath>

#include "disklab/bumps.hpp"
#include "disklab/calculus.hpp"
#include "disklab/convexity.hpp"
#include "disklab/flow.hpp"
#include "disklab/gauge.hpp"
#include "disklab/hardy.hpp"
#include "disklab/omega.hpp"
#include "disklab/poisson.hpp"
#include "disklab/rng.hpp"
#include "disklab/trace.hpp"

namespace disklab {

double cap_l2_distance(const MapField& u, double lambda) {
  const DiskGrid& g = u.grid();
  const MapField ref = cap_map(g, lambda);
  double s = 0.0;
  auto acc = [&](const std::vector<int>& nodes) {
    for (int idx : nodes) {
      double d2 = 0.0;
      for (int c = 0; c < u.dim(); ++c) {
        const double d = u.component(c)[idx] - ref.component(c)[idx];
        d2 += d * d;
      }
      s += g.quad_weight(idx) * d2;
    }
  };
  acc(g.interior());
  acc(g.boundary());
  return std::sqrt(s);
}

PipelineResult run_pipeline(const PipelineOpts& opts) {
  PipelineResult r;
  r.opts = opts;
  r.grid = std::make_shared<DiskGrid>(opts.nodes_per_axis);
  const DiskGrid& g = *r.grid;

  const BoundaryTrace trace = BoundaryTrace::cap(opts.lambda);
  FlowConfig fc;
  fc.tol = opts.tol_flow;
  fc.perturb_amp = opts.perturb_amp;
  fc.seed = opts.seed;
  try {
    FlowResult fr = solve_harmonic_sphere(g, trace, fc);
    r.u = std::move(fr.u);
    r.energy_u = fr.energy;
    r.flow_residual = fr.residual;
    r.flow_steps = fr.steps;
  } catch (const SolveError& e) {
    r.status = std::string("flow: ") + e.what();
    return r;
  }
  r.energy_cap_exact = cap_energy(opts.lambda);
  r.cap_l2_dist = cap_l2_distance(r.u, opts.lambda);

  const ConnectionForm om = omega_sphere(r.u);
  r.omega_l2sq = om.l2_norm_sq();
  if (!opts.run_gauge) {
    r.status = "ok (gauge not requested)";
    return r;
  }
  if (r.omega_l2sq > opts.eps_gauge) {
    r.status = "gauge skipped: int |Omega|^2 above threshold";
    return r;
  }

  try {
    GaugeOpts go;
    go.tol_rel = opts.tol_gauge_rel;
    GaugeResult gr = minimize_gauge(om, go);
    r.P = std::move(gr.P);
    r.gauge_energy = gr.energy;
    r.gauge_grad = gr.grad_norm;
    r.gauge_iters = gr.iterations;
    r.gauge_ran = true;
  } catch (const SolveError& e) {
    r.status = std::string("gauge: ") + e.what();
    return r;
  }

  const XiResult xi = extract_xi(r.P, om);
  r.res_coulomb = xi.res_coulomb;
  r.xi_linf = xi.xi_linf;
  r.grad_p_l2 = xi.grad_p_l2;

  const ABResult ab = build_AB(r.P, om, opts.tol_ab);
  r.ab_converged = ab.converged;
  r.res_ab = ab.res_ab;
  r.b_linf = ab.b_linf;
  r.ahat_linf = ab.ahat_linf;
  if (!ab.converged) {
    r.status = "ab: fixed point did not converge";
    return r;
  }

  EtaResult eta = build_eta(r.u, ab.A, ab.B);
  r.res_eta = eta.res_eta;
  r.res_conservation = eta.res_conservation;

  const DEResult de = compute_DE(r.u, ab.A, ab.B);
  r.res_hodge = de.res_hodge;
  r.d_linf = de.d_linf;
  r.grad_d_l21 = de.grad_d_l21;

  if (opts.run_structure) {
    const StructureReport sr =
        verify_deltaP_structure(r.u, r.P, xi, ab, eta, CoeffTensor::sphere(r.u.dim()));
    r.res_structure = sr.res_l2;
    r.structure_lhs = sr.lhs_l2;
  }

  const OscillationReport osc = oscillation_P(r.P, r.energy_u);
  r.osc_max = osc.max_osc;
  r.osc_ratio = osc.ratio;

  const ScalarField gu2 = grad_norm2(r.u);
  const BumpPair bumps = make_bumps();
  const HardyReport hr = h1_norm(gu2, bumps.phi);
  r.h1_gu2 = hr.h1;
  r.l1_gu2 = hr.l1;
  r.hardy_ratio = hr.h1 / std::max(hr.l1, 1e-300);

  // frozen-frame Jacobian lower bound on sampled center/point pairs
  {
    const int n = r.u.dim(), nn = g.n();
    const double h = g.spacing();
    std::vector<VecField> du, dpe;
    for (int c = 0; c < n; ++c) {
      du.push_back(grad(r.u.component(c)));
      dpe.push_back(perp_grad(eta.eta.component(c)));
    }
    Rng rng(opts.seed, "pointwise");
    const std::vector<int>& in = g.interior();
    const int target = 2000;
    int good = 0, total = 0;
    int guard = 0;
    while (total < target && guard < 50 * target) {
      ++guard;
      const int xidx = in[static_cast<size_t>(rng.uniform() * in.size())];
      const Vec2 x = g.node(xidx / nn, xidx % nn);
      const double margin = 1.0 - x.norm();
      if (margin < 4.0 * h) continue;
      const double rad = h + rng.uniform() * (margin / 2.0 - h);
      if (rad <= h) continue;
      const double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      const Vec2 y{x.x + rad * std::cos(ang), x.y + rad * std::sin(ang)};
      const int yi = static_cast<int>(std::lround((y.x + 1.0) / h));
      const int yj = static_cast<int>(std::lround((y.y + 1.0) / h));
      if (!g.in_domain(yi, yj) || !g.is_interior(yi, yj)) continue;
      const Vec2 yn = g.node(yi, yj);
      if ((yn - x).norm() > rad) continue;
      const int yidx = g.index(yi, yj);

      const Eigen::MatrixXd Px = r.P.at(xidx);
      double q = 0.0, dens = 0.0;
      for (int i = 0; i < n; ++i) {
        const Vec2 pe = dpe[i].at(yidx);
        for (int j = 0; j < n; ++j) q += Px(j, i) * dot(pe, du[j].at(yidx));
      }
      for (int j = 0; j < n; ++j) dens += du[j].at(yidx).norm2();
      ++total;
      if (q >= 0.25 * dens - 1e-12) ++good;
    }
    r.pointwise_total = total;
    r.pointwise_good = good;
    r.pointwise_frac = (total > 0) ? static_cast<double>(good) / total : 0.0;
  }

  r.eta = std::move(eta.eta);
  r.status = "ok";
  return r;
}

UniquenessReport uniqueness_probe(int nodes_per_axis, double lambda, int n_seeds,
                                  double perturb_amp, double tol_flow, uint64_t base_seed) {
  const DiskGrid g(nodes_per_axis);
  const BoundaryTrace trace = BoundaryTrace::cap(lambda);
  UniquenessReport rep;
  std::vector<MapField> sols;
  for (int s = 0; s < n_seeds; ++s) {
    FlowConfig fc;
    fc.tol = tol_flow;
    fc.perturb_amp = perturb_amp;
    fc.seed = base_seed + static_cast<uint64_t>(s);
    FlowResult fr = solve_harmonic_sphere(g, trace, fc);
    rep.energies.push_back(fr.energy);
    rep.steps.push_back(fr.steps);
    sols.push_back(std::move(fr.u));
  }
  for (size_t a = 0; a < sols.size(); ++a)
    for (size_t b = a + 1; b < sols.size(); ++b)
      rep.max_pairwise_w12 = std::max(rep.max_pairwise_w12, w12_distance(sols[a], sols[b]));
  return rep;
}

std::vector<PipelineResult> lambda_scan(const LabConfig& cfg) {
  std::vector<PipelineResult> out;
  out.reserve(cfg.lambdas.size());
  for (double lam : cfg.lambdas) {
    PipelineOpts o;
    o.nodes_per_axis = cfg.nodes_per_axis;
    o.lambda = lam;
    o.seed = cfg.seed;
    o.tol_flow = cfg.tol_flow;
    o.tol_gauge_rel = cfg.tol_gauge_rel;
    o.tol_ab = cfg.tol_ab;
    o.eps_gauge = cfg.eps_gauge;
    out.push_back(run_pipeline(o));
  }
  return out;
}

}  // namespace disklab
