#pragma once

#include "disklab/field.hpp"

namespace disklab {

// Lorentz L^{2,1} norm: integral over s > 0 of sqrt(measure{|f| > s}),
// evaluated exactly on the discrete measure (node values with quadrature
// weights) via the sorted layer-cake sum.
double lorentz21_norm(const ScalarField& f);

// Pointwise Euclidean norm of the gradient of a map, |grad u|(x).
ScalarField grad_abs(const MapField& u);

}  // namespace disklab
