#pragma once

#include <cstdint>
#include <vector>

#include "disklab/field.hpp"
#include "disklab/trace.hpp"

namespace disklab {

struct FlowConfig {
  double dt = 0.0;           // 0 -> h^2/8 (explicit stability with margin)
  double tol = 1e-3;         // L2 of the tension field
  long max_steps = 1500000;
  double perturb_amp = 0.0;  // optional smooth interior perturbation of the start
  uint64_t seed = 1;         // stream for the perturbation
  int history_every = 50;
};

struct FlowResult {
  MapField u;
  double energy = 0.0;
  double residual = 0.0;  // L2 norm of Laplacian u + |grad u|^2 u at the end
  long steps = 0;
  double dt_final = 0.0;
  std::vector<double> residual_history;
};

// Componentwise harmonic extension of the trace (no projection).
MapField harmonic_extension(const DiskGrid& g, const BoundaryTrace& trace);

// Tension field Laplacian u + |grad u|^2 u on Interior nodes.
MapField sphere_tension(const MapField& u);

// Projected explicit gradient flow for sphere-valued harmonic maps:
//   u <- Pi(u + dt (Laplacian u + |grad u|^2 u)),   Pi(p) = p/|p|,
// starting from the projected harmonic extension. Boundary values stay
// pinned. Steps that would raise the Dirichlet energy are rolled back with a
// halved dt, so the energy is non-increasing along accepted steps; dt is
// allowed to creep back up after long quiet stretches. Throws SolveError if
// the residual never reaches tol.
FlowResult solve_harmonic_sphere(const DiskGrid& g, const BoundaryTrace& trace,
                                 const FlowConfig& cfg = {});

}  // namespace disklab
