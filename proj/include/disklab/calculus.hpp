#pragma once

#include <variant>

#include "disklab/field.hpp"

namespace disklab {

// First derivatives: centred where both axis neighbours carry values (always
// true at Interior nodes), one-sided on the boundary band where the outward
// neighbour is Exterior. Results are defined on all non-Exterior nodes.
VecField grad(const ScalarField& f);
VecField perp_grad(const ScalarField& f);  // (-d/dy, d/dx)
ScalarField divergence(const VecField& v);
ScalarField curl(const VecField& v);  // dx v.y - dy v.x
// Five-point Laplacian, defined on Interior nodes (zero elsewhere).
ScalarField laplacian(const ScalarField& f);

// Stencil of the first-derivative operator at a non-Exterior node:
// value = sum of c * f(i + di, j + dj) over the returned terms. Centred where
// both axis neighbours are in the domain, one-sided otherwise (then one term
// is the node itself). Returns the number of terms (0 when neither neighbour
// exists).
struct DerivTerm {
  int di, dj;
  double c;
};
int deriv_stencil(const DiskGrid& g, int i, int j, int axis, DerivTerm out[2]);

enum class DiffKind { Grad, PerpGrad, Div, Curl, Laplacian };
using FieldAny = std::variant<ScalarField, VecField>;
// Rank-checked dispatcher; throws std::invalid_argument on a kind/rank mismatch.
FieldAny diff(const FieldAny& f, DiffKind kind);

// Quadrature: sum of value * node weight (h^2 Interior, h^2/2 Boundary),
// accumulated in increasing node-index order.
double integrate(const ScalarField& f);

double l2_norm(const ScalarField& f);
double l2_norm(const VecField& f);
double linf_norm(const ScalarField& f);
double l1_norm(const ScalarField& f);

// Pointwise |grad u|^2 summed over components.
ScalarField grad_norm2(const MapField& u);

// 0.5 * integral of |grad u|^2.
double dirichlet_energy(const MapField& u);

}  // namespace disklab
