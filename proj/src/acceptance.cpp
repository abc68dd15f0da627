#include "disklab/acceptance.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "disklab/bumps.hpp"
#include "disklab/calculus.hpp"
#include "disklab/config.hpp"
#include "disklab/convexity.hpp"
#include "disklab/gauge.hpp"
#include "disklab/hardy.hpp"
#include "disklab/omega.hpp"
#include "disklab/poisson.hpp"
#include "disklab/rng.hpp"
#include "disklab/runner.hpp"
#include "disklab/scan.hpp"
#include "disklab/trace.hpp"

namespace disklab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Scalar samples of a smooth function: lattice position on Interior nodes,
// radial projection on Boundary nodes, zero outside.
ScalarField sample_fn(const DiskGrid& g, const std::function<double(Vec2)>& fn) {
  ScalarField f(g);
  const int nn = g.n();
  for (int idx : g.interior()) f[idx] = fn(g.node(idx / nn, idx % nn));
  for (int idx : g.boundary()) f[idx] = fn(g.trace_point(idx / nn, idx % nn));
  return f;
}

// Full pipelines are the expensive ingredient; several checks share them.
// Keyed by (nodes_per_axis, lambda), always run with the frozen settings.
class PipelineCache {
 public:
  const PipelineResult& get(int n, double lambda) {
    const std::pair<int, int> key{n, static_cast<int>(std::lround(lambda * 1e4))};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    PipelineOpts o;
    o.nodes_per_axis = n;
    o.lambda = lambda;
    o.seed = 1;
    o.perturb_amp = 0.0;
    o.tol_flow = 1e-3;
    o.tol_gauge_rel = 1e-6;
    o.tol_ab = 1e-9;
    o.eps_gauge = 8.0;
    o.run_gauge = true;
    o.run_structure = true;
    return cache_.emplace(key, run_pipeline(o)).first->second;
  }

 private:
  std::map<std::pair<int, int>, PipelineResult> cache_;
};

struct Ctx {
  PipelineCache pipes;
};

using CheckFn = std::function<std::pair<bool, std::string>(Ctx&)>;

std::pair<bool, std::string> check_algebraic_identity(Ctx&) {
  Rng rng(1, "acceptance-identity");
  const int pairs = 10000;
  double max_gap = 0.0;
  for (int k = 0; k < pairs; ++k) {
    Vec2 x, y;
    do {
      rng.in_disk(x.x, x.y);
    } while (x.norm() < 1e-6);
    rng.in_disk(y.x, y.y);
    max_gap = std::max(max_gap, appendix_identity_gap(x, y));
  }
  const bool ok = max_gap <= 1e-12;
  return {ok, "max defect " + num(max_gap) + " over 10000 disk pairs (bound 1e-12)"};
}

std::pair<bool, std::string> check_dyadic_sandwich(Ctx&) {
  Rng rng(1, "acceptance-sandwich");
  const BumpPair bumps = make_bumps();
  const double bound = 20.0 * std::log(2.0);
  const int pairs = 10000;
  double max_abs = 0.0, max_lx = 0.0;
  for (int k = 0; k < pairs; ++k) {
    Vec2 x, y;
    do {
      rng.in_disk(x.x, x.y);
    } while (x.norm() < 1e-6);
    do {
      rng.in_disk(y.x, y.y);
    } while ((x - y).norm() < 1e-6);
    const SandwichResult s = sandwich_check(x, y, bumps.theta);
    max_abs = std::max(max_abs, std::abs(s.s));
    max_lx = std::max(max_lx, s.lx);
  }
  const bool ok = max_abs <= bound;
  return {ok, "max |log gap + counter*log2| = " + num(max_abs) + " <= " + num(bound) +
                  ", deepest counter " + num(max_lx)};
}

std::pair<bool, std::string> check_wente_closed_form(Ctx&) {
  DiskGrid g(129);
  const double h = g.spacing();
  ScalarField a = sample_fn(g, [](Vec2 p) { return p.x; });
  ScalarField b = sample_fn(g, [](Vec2 p) { return p.y; });
  const WenteReport rep = wente_solve(a, b, BcKind::Dirichlet);
  const int nn = g.n();
  double max_err = 0.0;
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / nn, idx % nn);
    const double exact = (1.0 - p.norm2()) / 4.0;
    max_err = std::max(max_err, std::abs(rep.w[idx] - exact));
  }
  const double tol = 5.0 * h * h;
  const bool ok = max_err <= tol && rep.w_linf >= 0.2475 && rep.w_linf <= 0.2525;
  return {ok, "unit-Jacobian solution off closed form by " + num(max_err) + " (bound " +
                  num(tol) + "), peak " + num(rep.w_linf) + " vs 0.25"};
}

std::pair<bool, std::string> check_harmonic_cap(Ctx& ctx) {
  const PipelineResult& r = ctx.pipes.get(129, 0.3);
  if (r.status != "ok") return {false, "pipeline status: " + r.status};
  const double exact = cap_energy(0.3);
  const double h = 2.0 / 128.0;
  const double err = std::abs(r.energy_u - exact);
  const bool ok = err <= 0.02 * exact && r.cap_l2_dist <= 3.0 * h;
  return {ok, "energy " + num(r.energy_u) + " vs " + num(exact) + " (tol 2%), map L2 off by " +
                  num(r.cap_l2_dist) + " (bound " + num(3.0 * h) + ")"};
}

std::pair<bool, std::string> check_gauge_residuals(Ctx& ctx) {
  const PipelineResult& c = ctx.pipes.get(65, 0.2);
  const PipelineResult& f = ctx.pipes.get(129, 0.2);
  if (c.status != "ok") return {false, "n=65 pipeline status: " + c.status};
  if (f.status != "ok") return {false, "n=129 pipeline status: " + f.status};
  bool ok = true;
  std::ostringstream d;
  const struct {
    const char* name;
    double coarse, fine;
  } rows[] = {{"coulomb", c.res_coulomb, f.res_coulomb},
              {"ab", c.res_ab, f.res_ab},
              {"conservation", c.res_conservation, f.res_conservation},
              {"eta", c.res_eta, f.res_eta}};
  for (const auto& row : rows) {
    const bool shrank = row.fine <= 1e-12 || row.coarse >= 1.5 * row.fine;
    ok = ok && shrank;
    d << row.name << " " << num(row.coarse) << "->" << num(row.fine)
      << (shrank ? "" : " (<1.5x)") << "; ";
  }
  double worst_b = 0.0;
  for (double lambda : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    const PipelineResult& r = ctx.pipes.get(129, lambda);
    if (r.status != "ok") return {false, "lambda=" + num(lambda) + " status: " + r.status};
    const double rel = r.b_linf / std::sqrt(2.0 * r.energy_u);
    worst_b = std::max(worst_b, rel);
  }
  ok = ok && worst_b <= 2.0;
  d << "max |B|_inf/||grad u||_L2 = " << num(worst_b) << " (bound 2)";
  return {ok, d.str()};
}

std::pair<bool, std::string> check_abelian_gauge_oracle(Ctx&) {
  DiskGrid g(65);
  const double h = g.spacing();
  auto bump4 = [](Vec2 p, Vec2 c, double radius, double amp) {
    const double q = 1.0 - (p - c).norm2() / (radius * radius);
    return q > 0.0 ? amp * q * q * q * q : 0.0;
  };
  auto rho_fn = [&](Vec2 p) { return bump4(p, {0.15, -0.1}, 0.6, 0.8); };
  auto sig_fn = [&](Vec2 p) { return bump4(p, {-0.2, 0.1}, 0.5, 0.5); };
  ScalarField rho = sample_fn(g, rho_fn);
  ScalarField sig = sample_fn(g, sig_fn);
  VecField alpha = grad(rho);
  const VecField ps = perp_grad(sig);
  for (size_t idx = 0; idx < alpha.x.data().size(); ++idx) {
    alpha.x[static_cast<int>(idx)] += ps.x[static_cast<int>(idx)];
    alpha.y[static_cast<int>(idx)] += ps.y[static_cast<int>(idx)];
  }
  ConnectionForm om(g, 2);
  om.entry(0, 1) = alpha;

  GaugeOpts opts;
  opts.tol_rel = 1e-6;
  opts.max_iter = 4000;
  const GaugeResult gr = minimize_gauge(om, opts);

  // The rotation angle that cancels the gradient part of alpha, up to one
  // global rotation; the divergence-free part is what remains.
  const int nn = g.n();
  FrameField Pe(g, 2);
  auto set_exact = [&](int idx, Vec2 p) {
    const double r = rho_fn(p);
    Eigen::Matrix2d m;
    m << std::cos(r), -std::sin(r), std::sin(r), std::cos(r);
    Pe.set(idx, m);
  };
  for (int idx : g.interior()) set_exact(idx, g.node(idx / nn, idx % nn));
  for (int idx : g.boundary()) set_exact(idx, g.trace_point(idx / nn, idx % nn));

  Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
  for (int idx : g.interior())
    M += g.quad_weight(idx) * Pe.at(idx).transpose() * gr.P.at(idx);
  for (int idx : g.boundary())
    M += g.quad_weight(idx) * Pe.at(idx).transpose() * gr.P.at(idx);
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d C = svd.matrixU() * svd.matrixV().transpose();
  if (C.determinant() < 0.0) {
    Eigen::Matrix2d flip = Eigen::Matrix2d::Identity();
    flip(1, 1) = -1.0;
    C = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  double err2 = 0.0;
  auto acc = [&](int idx) {
    const Eigen::Matrix2d d = Pe.at(idx) * C - gr.P.at(idx);
    err2 += g.quad_weight(idx) * d.squaredNorm();
  };
  for (int idx : g.interior()) acc(idx);
  for (int idx : g.boundary()) acc(idx);
  const double err = std::sqrt(err2);

  VecField gs = grad(sig);
  ScalarField gs2(g);
  for (int idx : g.interior()) gs2[idx] = gs.at(idx).norm2();
  for (int idx : g.boundary()) gs2[idx] = gs.at(idx).norm2();
  const double energy_exact = 2.0 * integrate(gs2);
  const double energy_err = std::abs(gr.energy - energy_exact);

  const bool ok = err <= 5.0 * h && energy_err <= 0.1 * std::max(energy_exact, 1e-12);
  return {ok, "aligned L2 distance to the closed-form frame " + num(err) + " (bound " +
                  num(5.0 * h) + "), energy " + num(gr.energy) + " vs " + num(energy_exact) +
                  " in " + num(static_cast<double>(gr.iterations)) + " iterations"};
}

std::pair<bool, std::string> check_maximal_function_floor(Ctx&) {
  DiskGrid g(129);
  const BumpPair bumps = make_bumps();
  ScalarField one = sample_fn(g, [](Vec2) { return 1.0; });
  const HardyReport flat = h1_norm(one, bumps.phi);
  const double pi = 3.14159265358979323846;
  const bool flat_ok = std::abs(flat.h1 - pi) <= 0.01 * pi;

  Rng rng(1, "acceptance-maximal");
  int violations = 0;
  double worst_margin = 0.0;
  for (int t = 0; t < 100; ++t) {
    ScalarField f(g);
    for (int idx : g.interior()) f[idx] = rng.normal();
    for (int idx : g.boundary()) f[idx] = rng.normal();
    const HardyReport r = h1_norm(f, bumps.phi);
    if (r.l1 > r.h1) ++violations;
    worst_margin = std::max(worst_margin, r.l1 - r.h1);
  }
  const bool ok = flat_ok && violations == 0;
  return {ok, "constant density: h1 " + num(flat.h1) + " vs pi (tol 1%); L1<=h1 held on " +
                  num(100 - violations) + "/100 rough fields (worst margin " +
                  num(worst_margin) + ")"};
}

std::pair<bool, std::string> check_hardy_ratio_stability(Ctx& ctx) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  std::ostringstream d;
  d << "ratios";
  for (double lambda : {0.05, 0.1, 0.2, 0.3}) {
    const PipelineResult& r = ctx.pipes.get(129, lambda);
    if (r.status != "ok") return {false, "lambda=" + num(lambda) + " status: " + r.status};
    const double ratio = r.hardy_ratio;
    d << " " << num(ratio);
    if (first || ratio < lo) lo = ratio;
    if (first || ratio > hi) hi = ratio;
    first = false;
  }
  bool ok = lo > 0.0 && hi / lo <= 10.0;
  d << " span x" << num(hi / lo) << " (bound 10)";

  const double r65 = ctx.pipes.get(65, 0.2).hardy_ratio;
  const double r129 = ctx.pipes.get(129, 0.2).hardy_ratio;
  const bool grid_stable = std::abs(r65 - r129) <= 0.25 * r129;
  ok = ok && grid_stable;
  d << "; across grids " << num(r65) << " vs " << num(r129);

  double worst_frac = 1.0;
  for (double lambda : {0.05, 0.1, 0.2}) {
    const PipelineResult& r = ctx.pipes.get(129, lambda);
    if (r.pointwise_total < 500)
      return {false, "lambda=" + num(lambda) + ": only " + num(r.pointwise_total) +
                         " frozen-frame samples"};
    worst_frac = std::min(worst_frac, r.pointwise_frac);
  }
  ok = ok && worst_frac >= 0.95;
  d << "; frozen-frame quarter bound held on " << num(100.0 * worst_frac) << "% (need 95%)";
  return {ok, d.str()};
}

std::pair<bool, std::string> check_density_dirichlet_bound(Ctx& ctx) {
  DiskGrid g(129);
  const double h = g.spacing();
  const BumpPair bumps = make_bumps();
  const int nn = g.n();

  ScalarField one = sample_fn(g, [](Vec2) { return 1.0; });
  const H1DirichletReport flat = solve_h1_dirichlet(one, bumps.phi);
  double max_err = 0.0;
  for (int idx : g.interior()) {
    const Vec2 p = g.node(idx / nn, idx % nn);
    const double exact = (p.norm2() - 1.0) / 4.0;
    max_err = std::max(max_err, std::abs(flat.psi[idx] - exact));
  }
  bool ok = max_err <= 5.0 * h * h;
  std::ostringstream d;
  d << "constant density potential off closed form by " << num(max_err) << " (bound "
    << num(5.0 * h * h) << "); ratios:";

  std::vector<std::pair<std::string, ScalarField>> densities;
  for (double w : {0.2, 0.05}) {
    RadialBump rb;
    rb.plateau_r = w / 2.0;
    rb.support_r = w;
    rb.amplitude = 1.0;
    rb.scale = 1.0;
    const double mass = disk_integral(rb);
    densities.emplace_back("bump" + num(w),
                           sample_fn(g, [&rb, mass](Vec2 p) { return rb(p.norm()) / mass; }));
  }
  for (double lambda : {0.1, 0.3}) {
    densities.emplace_back("cap" + num(lambda), sample_fn(g, [lambda](Vec2 p) {
                             const double q = 1.0 + lambda * lambda * p.norm2();
                             return 8.0 * lambda * lambda / (q * q);
                           }));
  }
  densities.emplace_back("flow0.2", grad_norm2(ctx.pipes.get(129, 0.2).u));

  double worst = 0.0;
  for (const auto& [name, f] : densities) {
    const H1DirichletReport rep = solve_h1_dirichlet(f, bumps.phi);
    worst = std::max(worst, rep.ratio);
    d << " " << name << "=" << num(rep.ratio);
  }
  ok = ok && worst <= 2.0;
  d << " (bound 2)";
  return {ok, d.str()};
}

std::pair<bool, std::string> check_energy_convexity(Ctx& ctx) {
  const PipelineResult& r = ctx.pipes.get(129, 0.2);
  if (r.status != "ok") return {false, "pipeline status: " + r.status};
  const double h = 2.0 / 128.0;
  bool ok = true;
  double min_gap = 0.0, worst_mismatch = 0.0;
  std::ostringstream d;
  for (uint64_t seed : {11u, 12u, 13u}) {
    const MapField v = make_competitor(r.u, 0.3, seed);
    const ConvexityReport c = convexity_report(r.u, v);
    min_gap = std::min(min_gap, c.gap);
    if (c.gap < -1e-3 * c.int_gd2) ok = false;

    const double mismatch = std::abs(c.psi_direct - c.psi_tension);
    const double mismatch_tol = 5.0 * (h + 1e-3) * (c.int_gu2 + c.int_gv2);
    worst_mismatch = std::max(worst_mismatch, mismatch / mismatch_tol);
    if (mismatch > mismatch_tol) ok = false;

    if (std::sqrt(c.chain_mid) > 4.0 * c.psi_linf * std::sqrt(c.int_gd2) + 1e-3) ok = false;
    if (c.chain_lhs > 2.0 * std::sqrt(c.int_gd2 * c.chain_mid) + 1e-3) ok = false;
  }
  d << "min gap " << num(min_gap) << " over 3 competitors (floor -1e-3*|grad diff|^2); "
    << "tension identity at " << num(100.0 * worst_mismatch)
    << "% of budget; both chain bounds held";
  return {ok, d.str()};
}

std::pair<bool, std::string> check_uniqueness_probe(Ctx&) {
  const UniquenessReport u = uniqueness_probe(129, 0.2, 5, 0.3, 1e-3, 1);
  const double bound = 10.0 * (2.0 / 128.0 + 1e-3);
  double emin = u.energies[0], emax = u.energies[0];
  for (double e : u.energies) {
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  const bool ok = u.max_pairwise_w12 <= bound;
  return {ok, "5 perturbed starts collapse within W12 distance " + num(u.max_pairwise_w12) +
                  " (bound " + num(bound) + "), energies in [" + num(emin) + ", " +
                  num(emax) + "]"};
}

std::pair<bool, std::string> check_normal_component_identity(Ctx&) {
  Rng rng(1, "acceptance-normal");
  double max_gap = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const std::vector<double> p = rng.unit_vec(3);
    const std::vector<double> q = rng.unit_vec(3);
    max_gap = std::max(max_gap, normal_component_gap(p, q));
  }
  const bool ok = max_gap <= 1e-12;
  return {ok, "max defect " + num(max_gap) + " over 10000 sphere pairs (bound 1e-12)"};
}

std::pair<bool, std::string> check_determinism(Ctx&) {
  LabConfig cfg;
  cfg.nodes_per_axis = 33;
  cfg.lambdas = {0.2};
  cfg.seed = 1;
  const std::vector<PipelineResult> a = lambda_scan(cfg);
  const std::vector<PipelineResult> b = lambda_scan(cfg);
  const std::string csv_a = experiments_csv_text("scan", cfg, a);
  const std::string csv_b = experiments_csv_text("scan", cfg, b);
  const std::string gauge_a = gauge_report_text(a), gauge_b = gauge_report_text(b);
  const std::string hardy_a = hardy_report_text(a), hardy_b = hardy_report_text(b);
  const bool ok = csv_a == csv_b && gauge_a == gauge_b && hardy_a == hardy_b;
  std::ostringstream d;
  if (ok) {
    d << "two n=33 scans reproduced " << csv_a.size() + gauge_a.size() + hardy_a.size()
      << " bytes of csv and reports byte for byte";
  } else {
    d << "rerun differs: csv " << (csv_a == csv_b ? "same" : "DIFFERS") << ", gauge report "
      << (gauge_a == gauge_b ? "same" : "DIFFERS") << ", maximal-function report "
      << (hardy_a == hardy_b ? "same" : "DIFFERS");
  }
  return {ok, d.str()};
}

}  // namespace

std::vector<CheckResult> run_acceptance(std::ostream* log) {
  const std::pair<const char*, CheckFn> checks[] = {
      {"algebraic-identity", check_algebraic_identity},
      {"dyadic-sandwich", check_dyadic_sandwich},
      {"wente-closed-form", check_wente_closed_form},
      {"harmonic-cap", check_harmonic_cap},
      {"gauge-residuals", check_gauge_residuals},
      {"abelian-gauge-oracle", check_abelian_gauge_oracle},
      {"maximal-function-floor", check_maximal_function_floor},
      {"hardy-ratio-stability", check_hardy_ratio_stability},
      {"density-dirichlet-bound", check_density_dirichlet_bound},
      {"energy-convexity", check_energy_convexity},
      {"uniqueness-probe", check_uniqueness_probe},
      {"normal-component-identity", check_normal_component_identity},
      {"determinism", check_determinism},
  };
  Ctx ctx;
  std::vector<CheckResult> out;
  for (const auto& [id, fn] : checks) {
    CheckResult r;
    r.id = id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto [ok, detail] = fn(ctx);
      r.pass = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    if (log) {
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
      *log << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.detail << " (" << secs
           << "s)" << std::endl;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace disklab
