#pragma once

#include <stdexcept>
#include <string>

#include "disklab/calculus.hpp"
#include "disklab/field.hpp"

namespace disklab {

enum class BcKind { Dirichlet, Neumann };

// Laplacian u = rhs on the disk, five-point operator on Interior nodes.
// Dirichlet: u fixed on Boundary nodes (trace, or zero when null).
// Neumann: zero flux through the lattice boundary (missing neighbours simply
// drop out of the stencil), rhs mean-corrected for compatibility, solution
// returned with zero quadrature mean.
struct PoissonProblem {
  const ScalarField* rhs = nullptr;
  BcKind bc = BcKind::Dirichlet;
  const ScalarField* trace = nullptr;    // Dirichlet only
  double tol = 1e-10;                    // relative residual target
  int max_iter = 0;                      // 0 -> 20 * n^2
  const ScalarField* initial = nullptr;  // warm start
};

struct PoissonResult {
  ScalarField u;
  double rel_residual = 0.0;
  int iterations = 0;
  double mean_removed = 0.0;  // Neumann: quadrature mean subtracted from rhs
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, double rel_residual, int iterations)
      : std::runtime_error(what), rel_residual(rel_residual), iterations(iterations) {}
  double rel_residual;
  int iterations;
};

PoissonResult solve_poisson(const PoissonProblem& p);

ScalarField solve_dirichlet(const ScalarField& rhs,
                            const ScalarField* trace = nullptr,
                            const ScalarField* initial = nullptr);
ScalarField solve_neumann(const ScalarField& rhs,
                          const ScalarField* initial = nullptr);

}  // namespace disklab
