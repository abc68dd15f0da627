#pragma once

#include "disklab/bumps.hpp"
#include "disklab/field.hpp"
#include "disklab/poisson.hpp"
#include "disklab/vec2.hpp"

namespace disklab {

// Radial maximal function
//   f*(x) = sup over scales t in (0, 1-|x|) of |(phi_t * f)(x)|,
// phi_t(z) = phi(|z|/t)/t^2. Discrete sup over the dyadic ladder
// (1-|x|) 2^{-m} down to the spacing, plus spacing-aligned dyadic scales.
// Each discrete kernel is mass-normalized, and the scale-zero limit |f(x)|
// participates, so f* >= |f| holds exactly nodewise.
ScalarField radial_maximal(const ScalarField& f, const RadialBump& phi);

struct HardyReport {
  ScalarField fstar;
  double h1 = 0.0;  // integral of f*
  double l1 = 0.0;  // integral of |f|
};
HardyReport h1_norm(const ScalarField& f, const RadialBump& phi);

// Laplacian w = grad a . perp_grad b (= a_y b_x - a_x b_y) with the chosen
// boundary condition; Neumann gets the compatibility mean correction.
struct WenteReport {
  ScalarField w;
  double w_linf = 0.0;
  double grad_l2 = 0.0;
  double grad_l21 = 0.0;
  double denom = 0.0;  // ||grad a||_L2 * ||grad b||_L2
};
WenteReport wente_solve(const ScalarField& a, const ScalarField& b, BcKind bc);

// Gap of the planar identity
//   (1-|x|^2)(1-|y|^2) = |x/|x| - |x| y|^2 - |x-y|^2.
// Throws for |x| < 1e-12 where the left factor needs the limit form.
double appendix_identity_gap(Vec2 x, Vec2 y);

// Dyadic counter l_x(y) = sum over j >= 0 of theta(2^j |x-y| / (1-|x|)).
// The sum is finite: terms vanish once 2^j |x-y| / (1-|x|) leaves the
// support of theta; truncated at ceil(log2(1/|x-y|)) + 8 which covers that.
double l_x(Vec2 x, Vec2 y, const RadialBump& theta);

// s = log|x-y| - log|x/|x| - |x| y| + l_x(y) log 2, which stays within
// +-20 log 2 on the open disk. x = 0 uses the limit of the middle term.
struct SandwichResult {
  double s = 0.0;
  double lx = 0.0;
};
SandwichResult sandwich_check(Vec2 x, Vec2 y, const RadialBump& theta);

// For f >= 0: psi with Laplacian psi = f, zero trace, and the ratio
// (||psi||_inf + ||grad psi||_L2) / h1-norm of f.
struct H1DirichletReport {
  ScalarField psi;
  double psi_linf = 0.0;
  double grad_l2 = 0.0;
  double h1_f = 0.0;
  double ratio = 0.0;
};
H1DirichletReport solve_h1_dirichlet(const ScalarField& f, const RadialBump& phi);

}  // namespace disklab
