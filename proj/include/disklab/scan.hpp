#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "disklab/config.hpp"
#include "disklab/field.hpp"
#include "disklab/frame.hpp"

namespace disklab {

// One end-to-end run at a fixed spherical-cap boundary: flow to the harmonic
// map, build the gauge frame, the conservation-law potentials and the
// maximal-function norms, and record every stage residual.
struct PipelineOpts {
  int nodes_per_axis = 129;
  double lambda = 0.2;  // cap opening parameter of the boundary curve
  uint64_t seed = 1;
  double perturb_amp = 0.0;  // optional perturbation of the flow start
  double tol_flow = 1e-3;
  double tol_gauge_rel = 1e-6;
  double tol_ab = 1e-9;
  double eps_gauge = 8.0;  // skip the gauge stage above this int |Omega|^2
  bool run_gauge = true;
  bool run_structure = true;
};

struct PipelineResult {
  std::shared_ptr<DiskGrid> grid;  // owns the lattice the fields point into
  PipelineOpts opts;
  std::string status;  // "ok" or the reason a stage stopped

  // flow stage
  MapField u;
  double energy_u = 0.0;  // Dirichlet energy (with the 1/2)
  double flow_residual = 0.0;
  long flow_steps = 0;
  double energy_cap_exact = 0.0;  // closed-form energy of the cap map
  double cap_l2_dist = 0.0;       // L2 distance to the closed-form cap map

  // gauge stage
  double omega_l2sq = 0.0;  // int |Omega|^2
  bool gauge_ran = false;
  FrameField P;  // filled when the gauge stage runs
  double gauge_energy = 0.0, gauge_grad = 0.0;
  int gauge_iters = 0;
  double res_coulomb = 0.0, xi_linf = 0.0, grad_p_l2 = 0.0;

  bool ab_converged = false;
  double res_ab = 0.0, b_linf = 0.0, ahat_linf = 0.0;

  MapField eta;
  double res_eta = 0.0, res_conservation = 0.0;
  double res_hodge = 0.0, d_linf = 0.0, grad_d_l21 = 0.0;

  double res_structure = 0.0, structure_lhs = 0.0;
  double osc_max = 0.0, osc_ratio = 0.0;

  // maximal function of the energy density
  double h1_gu2 = 0.0;     // h^1 norm of |grad u|^2
  double l1_gu2 = 0.0;     // plain integral of |grad u|^2
  double hardy_ratio = 0.0;

  // sampled lower bound: the frozen-frame Jacobian against the energy density
  int pointwise_total = 0;
  int pointwise_good = 0;
  double pointwise_frac = 0.0;
};

PipelineResult run_pipeline(const PipelineOpts& opts);

// L2 distance between a computed map and the closed-form cap map.
double cap_l2_distance(const MapField& u, double lambda);

// Repeated flows from perturbed starts; with the same boundary the limits
// should collapse onto one map.
struct UniquenessReport {
  std::vector<double> energies;
  std::vector<long> steps;
  double max_pairwise_w12 = 0.0;
};

UniquenessReport uniqueness_probe(int nodes_per_axis, double lambda, int n_seeds,
                                  double perturb_amp, double tol_flow, uint64_t base_seed = 1);

// One pipeline per lambda in the config.
std::vector<PipelineResult> lambda_scan(const LabConfig& cfg);

}  // namespace disklab
