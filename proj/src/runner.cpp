#include "disklab/runner.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "disklab/acceptance.hpp"
#include "disklab/bumps.hpp"
#include "disklab/calculus.hpp"
#include "disklab/convexity.hpp"
#include "disklab/hardy.hpp"
#include "disklab/io.hpp"
#include "disklab/rng.hpp"

namespace disklab {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// "0.05" -> "0p05", usable in file names.
std::string lambda_tag(double lambda) {
  std::string s = fmt_double(lambda);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

fs::path out_path(const LabConfig& cfg, const std::string& name) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir / name;
}

bool status_ok(const std::string& status) {
  return status.rfind("ok", 0) == 0;
}

bool status_skipped_gauge(const std::string& status) {
  return status.rfind("gauge skipped", 0) == 0;
}

void collect_status_failures(const std::vector<PipelineResult>& rows,
                             std::vector<std::string>& failures) {
  for (const PipelineResult& r : rows) {
    if (status_ok(r.status) || status_skipped_gauge(r.status)) continue;
    std::ostringstream os;
    os << "lambda=" << fmt_double(r.opts.lambda) << ": " << r.status;
    failures.push_back(os.str());
  }
}

void write_failures(const LabConfig& cfg, const std::vector<std::string>& failures) {
  if (failures.empty()) return;
  std::string text;
  for (const std::string& f : failures) text += f + "\n";
  write_text_file(out_path(cfg, "failures.txt").string(), text);
}

void write_config_snapshot(const LabConfig& cfg) {
  write_text_file(out_path(cfg, "config.json").string(), cfg.canonical_json() + "\n");
}

std::vector<PipelineResult> scan_with(const LabConfig& cfg, bool run_gauge) {
  std::vector<PipelineResult> rows;
  rows.reserve(cfg.lambdas.size());
  for (double lambda : cfg.lambdas) {
    PipelineOpts o;
    o.nodes_per_axis = cfg.nodes_per_axis;
    o.lambda = lambda;
    o.seed = cfg.seed;
    o.tol_flow = cfg.tol_flow;
    o.tol_gauge_rel = cfg.tol_gauge_rel;
    o.tol_ab = cfg.tol_ab;
    o.eps_gauge = cfg.eps_gauge;
    o.run_gauge = run_gauge;
    rows.push_back(run_pipeline(o));
  }
  return rows;
}

// gnuplot companion for experiments.csv; kept as text so a run without
// gnuplot still documents how the figures are made.
const char* kHardyPlotScript =
    "# gnuplot script for the scan artifacts in this directory\n"
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set terminal pngcairo size 900,600\n"
    "set xlabel 'lambda'\n"
    "set output 'hardy-ratio.png'\n"
    "set ylabel 'h1 / L1 of the energy density'\n"
    "plot 'experiments.csv' using 'lambda':'hardy_ratio' with linespoints pointtype 7 title 'ratio'\n"
    "set output 'residuals.png'\n"
    "set ylabel 'stage residuals'\n"
    "set logscale y\n"
    "plot 'experiments.csv' using 'lambda':'res_coulomb' with linespoints title 'coulomb', \\\n"
    "     'experiments.csv' using 'lambda':'res_ab' with linespoints title 'A/B', \\\n"
    "     'experiments.csv' using 'lambda':'res_eta' with linespoints title 'eta', \\\n"
    "     'experiments.csv' using 'lambda':'res_hodge' with linespoints title 'hodge'\n";

RunOutcome run_harmonic(const LabConfig& cfg) {
  RunOutcome out;
  std::vector<PipelineResult> rows = scan_with(cfg, /*run_gauge=*/false);
  for (const PipelineResult& r : rows) {
    const std::string tag = lambda_tag(r.opts.lambda);
    write_map_csv(out_path(cfg, "u-lambda-" + tag + ".csv").string(), r.u);
    write_field_ppm(out_path(cfg, "density-lambda-" + tag + ".ppm").string(),
                    grad_norm2(r.u));
  }
  write_text_file(out_path(cfg, "experiments.csv").string(),
                  experiments_csv_text("harmonic", cfg, rows));
  collect_status_failures(rows, out.failures);
  write_failures(cfg, out.failures);
  write_config_snapshot(cfg);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

RunOutcome run_gauge_kind(const LabConfig& cfg) {
  RunOutcome out;
  std::vector<PipelineResult> rows = scan_with(cfg, /*run_gauge=*/true);
  write_text_file(out_path(cfg, "experiments.csv").string(),
                  experiments_csv_text("gauge", cfg, rows));
  write_text_file(out_path(cfg, "gauge-report.json").string(), gauge_report_text(rows));
  for (const PipelineResult& r : rows) {
    if (!r.gauge_ran) continue;
    const std::string tag = lambda_tag(r.opts.lambda);
    write_map_csv(out_path(cfg, "eta-lambda-" + tag + ".csv").string(), r.eta);
  }
  collect_status_failures(rows, out.failures);
  write_failures(cfg, out.failures);
  write_config_snapshot(cfg);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

RunOutcome run_hardy(const LabConfig& cfg) {
  RunOutcome out;
  std::vector<PipelineResult> rows = scan_with(cfg, /*run_gauge=*/true);
  write_text_file(out_path(cfg, "experiments.csv").string(),
                  experiments_csv_text("hardy", cfg, rows));
  write_text_file(out_path(cfg, "hardy-report.json").string(), hardy_report_text(rows));
  const BumpPair bumps = make_bumps();
  for (const PipelineResult& r : rows) {
    const std::string tag = lambda_tag(r.opts.lambda);
    HardyReport h = h1_norm(grad_norm2(r.u), bumps.phi);
    write_field_csv(out_path(cfg, "fstar-lambda-" + tag + ".csv").string(), h.fstar);
    write_field_ppm(out_path(cfg, "fstar-lambda-" + tag + ".ppm").string(), h.fstar);
  }
  write_text_file(out_path(cfg, "plot-hardy.gp").string(), kHardyPlotScript);
  collect_status_failures(rows, out.failures);
  write_failures(cfg, out.failures);
  write_config_snapshot(cfg);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

RunOutcome run_convexity(const LabConfig& cfg) {
  RunOutcome out;
  std::vector<PipelineResult> rows = scan_with(cfg, /*run_gauge=*/false);
  ordered_json report = ordered_json::array();
  for (const PipelineResult& r : rows) {
    if (!status_ok(r.status)) continue;
    for (uint64_t s = 0; s < 3; ++s) {
      MapField v = make_competitor(r.u, 0.3, cfg.seed + 100 + s);
      ConvexityReport c = convexity_report(r.u, v);
      ordered_json row;
      row["lambda"] = r.opts.lambda;
      row["competitor_seed"] = cfg.seed + 100 + s;
      row["energy_u"] = 0.5 * c.int_gu2;
      row["energy_v"] = 0.5 * c.int_gv2;
      row["int_grad_diff2"] = c.int_gd2;
      row["gap"] = c.gap;
      row["psi_direct"] = c.psi_direct;
      row["psi_tension"] = c.psi_tension;
      row["chain_lhs"] = c.chain_lhs;
      row["chain_mid"] = c.chain_mid;
      row["psi_linf"] = c.psi_linf;
      report.push_back(row);
      if (c.gap < -1e-3 * c.int_gd2) {
        std::ostringstream os;
        os << "lambda=" << fmt_double(r.opts.lambda) << " seed=" << cfg.seed + 100 + s
           << ": convexity gap " << fmt_double(c.gap) << " below tolerance";
        out.failures.push_back(os.str());
      }
    }
  }
  write_text_file(out_path(cfg, "experiments.csv").string(),
                  experiments_csv_text("convexity", cfg, rows));
  write_text_file(out_path(cfg, "convexity-report.json").string(), report.dump(2) + "\n");
  collect_status_failures(rows, out.failures);
  write_failures(cfg, out.failures);
  write_config_snapshot(cfg);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

RunOutcome run_appendix(const LabConfig& cfg) {
  RunOutcome out;
  const int pairs = 10000;
  Rng rng(cfg.seed, "appendix");
  const BumpPair bumps = make_bumps();
  double max_gap = 0.0, max_s = 0.0;
  const double bound_s = 20.0 * std::log(2.0);
  for (int k = 0; k < pairs; ++k) {
    Vec2 x, y;
    do {
      rng.in_disk(x.x, x.y);
    } while (x.norm() < 1e-6);
    rng.in_disk(y.x, y.y);
    max_gap = std::max(max_gap, appendix_identity_gap(x, y));
    if ((x - y).norm() >= 1e-6) {
      const SandwichResult s = sandwich_check(x, y, bumps.theta);
      max_s = std::max(max_s, std::abs(s.s));
    }
  }
  ordered_json report;
  report["pairs"] = pairs;
  report["identity_max_gap"] = max_gap;
  report["sandwich_max_abs"] = max_s;
  report["sandwich_bound"] = bound_s;
  write_text_file(out_path(cfg, "appendix-report.json").string(), report.dump(2) + "\n");
  if (max_gap > 1e-12)
    out.failures.push_back("identity gap " + fmt_double(max_gap) + " above 1e-12");
  if (max_s > bound_s)
    out.failures.push_back("sandwich excursion " + fmt_double(max_s) + " above 20 log 2");
  write_failures(cfg, out.failures);
  write_config_snapshot(cfg);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

RunOutcome run_uniqueness(const LabConfig& cfg) {
  RunOutcome out;
  ordered_json report = ordered_json::array();
  const double h = 2.0 / (cfg.nodes_per_axis - 1);
  for (double lambda : cfg.lambdas) {
    UniquenessReport u =
        uniqueness_probe(cfg.nodes_per_axis, lambda, 3, 0.3, cfg.tol_flow, cfg.seed);
    ordered_json row;
    row["lambda"] = lambda;
    row["energies"] = u.energies;
    row["flow_steps"] = u.steps;
    row["max_pairwise_w12"] = u.max_pairwise_w12;
    report.push_back(row);
    if (u.max_pairwise_w12 > 10.0 * (h + cfg.tol_flow)) {
      std::ostringstream os;
      os << "lambda=" << fmt_double(lambda) << ": limits spread "
         << fmt_double(u.max_pairwise_w12) << " in W^{1,2}";
      out.failures.push_back(os.str());
    }
  }
  write_text_file(out_path(cfg, "uniqueness-report.json").string(), report.dump(2) + "\n");
  write_failures(cfg, out.failures);
  write_config_snapshot(cfg);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

RunOutcome run_scan(const LabConfig& cfg) {
  RunOutcome out;
  std::vector<PipelineResult> rows = lambda_scan(cfg);
  write_text_file(out_path(cfg, "experiments.csv").string(),
                  experiments_csv_text("scan", cfg, rows));
  write_text_file(out_path(cfg, "gauge-report.json").string(), gauge_report_text(rows));
  write_text_file(out_path(cfg, "hardy-report.json").string(), hardy_report_text(rows));
  write_text_file(out_path(cfg, "plot-hardy.gp").string(), kHardyPlotScript);
  collect_status_failures(rows, out.failures);
  write_failures(cfg, out.failures);
  write_config_snapshot(cfg);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

RunOutcome run_verify(const LabConfig&) {
  RunOutcome out;
  std::vector<CheckResult> checks = run_acceptance(&std::cout);
  for (const CheckResult& c : checks)
    if (!c.pass) out.failures.push_back(c.id + ": " + c.detail);
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

}  // namespace

std::vector<std::string> runner_kinds() {
  return {"harmonic", "gauge",      "hardy", "convexity",
          "appendix", "uniqueness", "scan",  "verify"};
}

RunOutcome run_experiment(const std::string& kind, const LabConfig& cfg) {
  if (kind == "harmonic") return run_harmonic(cfg);
  if (kind == "gauge") return run_gauge_kind(cfg);
  if (kind == "hardy") return run_hardy(cfg);
  if (kind == "convexity") return run_convexity(cfg);
  if (kind == "appendix") return run_appendix(cfg);
  if (kind == "uniqueness") return run_uniqueness(cfg);
  if (kind == "scan") return run_scan(cfg);
  if (kind == "verify") return run_verify(cfg);
  throw std::invalid_argument("run_experiment: unknown kind '" + kind + "'");
}

std::string experiments_csv_text(const std::string& kind, const LabConfig& cfg,
                                 const std::vector<PipelineResult>& rows) {
  std::ostringstream os;
  os << "schema_version,kind,config_hash,nodes_per_axis,lambda,seed,status,"
        "energy,energy_cap_exact,cap_l2_dist,flow_steps,flow_residual,"
        "omega_l2sq,gauge_ran,gauge_energy,gauge_grad,gauge_iters,"
        "res_coulomb,xi_linf,grad_p_l2,ab_converged,res_ab,b_linf,ahat_linf,"
        "res_eta,res_conservation,res_hodge,d_linf,grad_d_l21,"
        "res_structure,structure_lhs,osc_max,osc_ratio,"
        "h1_gu2,l1_gu2,hardy_ratio,pointwise_total,pointwise_good,pointwise_frac\n";
  const std::string hash = cfg.hash_hex();
  for (const PipelineResult& r : rows) {
    os << 1 << ',' << csv_cell(kind) << ',' << hash << ',' << r.opts.nodes_per_axis << ','
       << fmt_double(r.opts.lambda) << ',' << r.opts.seed << ',' << csv_cell(r.status) << ','
       << fmt_double(r.energy_u) << ',' << fmt_double(r.energy_cap_exact) << ','
       << fmt_double(r.cap_l2_dist) << ',' << r.flow_steps << ','
       << fmt_double(r.flow_residual) << ',' << fmt_double(r.omega_l2sq) << ','
       << (r.gauge_ran ? 1 : 0) << ',' << fmt_double(r.gauge_energy) << ','
       << fmt_double(r.gauge_grad) << ',' << r.gauge_iters << ','
       << fmt_double(r.res_coulomb) << ',' << fmt_double(r.xi_linf) << ','
       << fmt_double(r.grad_p_l2) << ',' << (r.ab_converged ? 1 : 0) << ','
       << fmt_double(r.res_ab) << ',' << fmt_double(r.b_linf) << ','
       << fmt_double(r.ahat_linf) << ',' << fmt_double(r.res_eta) << ','
       << fmt_double(r.res_conservation) << ',' << fmt_double(r.res_hodge) << ','
       << fmt_double(r.d_linf) << ',' << fmt_double(r.grad_d_l21) << ','
       << fmt_double(r.res_structure) << ',' << fmt_double(r.structure_lhs) << ','
       << fmt_double(r.osc_max) << ',' << fmt_double(r.osc_ratio) << ','
       << fmt_double(r.h1_gu2) << ',' << fmt_double(r.l1_gu2) << ','
       << fmt_double(r.hardy_ratio) << ',' << r.pointwise_total << ','
       << r.pointwise_good << ',' << fmt_double(r.pointwise_frac) << '\n';
  }
  return os.str();
}

std::string gauge_report_text(const std::vector<PipelineResult>& rows) {
  ordered_json report = ordered_json::array();
  for (const PipelineResult& r : rows) {
    ordered_json row;
    row["lambda"] = r.opts.lambda;
    row["status"] = r.status;
    row["omega_l2sq"] = r.omega_l2sq;
    row["gauge"] = {{"ran", r.gauge_ran},
                    {"energy", r.gauge_energy},
                    {"grad_norm", r.gauge_grad},
                    {"iterations", r.gauge_iters}};
    row["coulomb"] = {{"residual", r.res_coulomb},
                      {"xi_linf", r.xi_linf},
                      {"grad_p_l2", r.grad_p_l2}};
    row["ab"] = {{"converged", r.ab_converged},
                 {"residual", r.res_ab},
                 {"b_linf", r.b_linf},
                 {"ahat_linf", r.ahat_linf}};
    row["conservation"] = {{"res_eta", r.res_eta}, {"res_weak", r.res_conservation}};
    row["hodge"] = {{"residual", r.res_hodge},
                    {"d_linf", r.d_linf},
                    {"grad_d_l21", r.grad_d_l21}};
    row["structure"] = {{"residual", r.res_structure}, {"lhs_l2", r.structure_lhs}};
    row["oscillation"] = {{"max", r.osc_max}, {"ratio", r.osc_ratio}};
    report.push_back(row);
  }
  return report.dump(2) + "\n";
}

std::string hardy_report_text(const std::vector<PipelineResult>& rows) {
  ordered_json report = ordered_json::array();
  for (const PipelineResult& r : rows) {
    ordered_json row;
    row["lambda"] = r.opts.lambda;
    row["status"] = r.status;
    row["energy"] = r.energy_u;
    row["h1_density"] = r.h1_gu2;
    row["l1_density"] = r.l1_gu2;
    row["ratio"] = r.hardy_ratio;
    row["pointwise"] = {{"total", r.pointwise_total},
                        {"good", r.pointwise_good},
                        {"frac", r.pointwise_frac}};
    report.push_back(row);
  }
  return report.dump(2) + "\n";
}

}  // namespace disklab
