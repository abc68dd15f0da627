#pragma once

#include <cstdint>
#include <vector>

#include "disklab/field.hpp"

namespace disklab {

// Quantities for the energy convexity of a sphere-valued harmonic map u
// against a competitor v with the same boundary values:
//   int |grad v|^2 - int |grad u|^2 >= 1/2 int |grad(v-u)|^2
// together with the chain of inequalities that proves it via the Dirichlet
// potential psi of the energy density (Laplacian psi = |grad u|^2, psi = 0 on
// the rim).
struct ConvexityReport {
  double int_gu2 = 0.0;    // int |grad u|^2
  double int_gv2 = 0.0;    // int |grad v|^2
  double int_gd2 = 0.0;    // int |grad (v-u)|^2
  double gap = 0.0;        // int_gv2 - int_gu2 - 0.5*int_gd2

  // the defect term two ways: as the exact pointwise identity
  //   |grad v|^2 - |grad u|^2 - |grad(v-u)|^2 = 2 <grad(v-u), grad u>
  // integrated, and through the equation as 2 int <v-u, |grad u|^2 u>
  double psi_direct = 0.0;
  double psi_tension = 0.0;

  double chain_lhs = 0.0;   // int |v-u|^2 |grad u|^2
  double chain_mid = 0.0;   // int |v-u|^2 |grad psi|^2
  double psi_linf = 0.0;
  double grad_psi_l2 = 0.0;
};

ConvexityReport convexity_report(const MapField& u, const MapField& v);

// Competitor with the same trace: v = Pi(u + amp * cut * w) where cut is the
// squared parabolic cutoff (1-|x|^2)^2 (exactly zero on the rim) and w is a
// smooth seeded vector field. Throws if the projection degenerates.
MapField make_competitor(const MapField& u, double amp, uint64_t seed);

// |<p-q, p> - |p-q|^2/2| which vanishes identically for unit vectors p, q.
double normal_component_gap(const std::vector<double>& p, const std::vector<double>& q);

// Full W^{1,2} distance sqrt(int |a-b|^2 + int |grad(a-b)|^2).
double w12_distance(const MapField& a, const MapField& b);

}  // namespace disklab
