#pragma once

#include "disklab/field.hpp"
#include "disklab/vec2.hpp"

namespace disklab {

// Green function of the Laplacian on the unit disk with zero trace:
//   (1/2pi) * (log|x-y| - log|x/|x| - |x|y|),
// reducing to (1/2pi) log|y| when x = 0. Negative inside, symmetric in x,y.
// Throws std::invalid_argument when |x-y| < 1e-14.
double green_function(Vec2 x, Vec2 y);

// Superposition integral psi(x) = integral G(x,y) f(y) dy by grid quadrature,
// skipping the singular node. Oracle-quality only: O(h^2 log h) error.
double green_superposition(const ScalarField& f, Vec2 x);

}  // namespace disklab
