#pragma once

#include <memory>
#include <vector>

#include "disklab/field.hpp"

namespace disklab {

// Best rotational potential: minimizes the quadrature-weighted defect
// |perp_grad e - v|^2 over the domain, built from the same one-sided
// stencils as the calculus operators. The minimizer's natural boundary data
// falls out of the normal equations instead of being imposed, which is what
// a divergence-free v with nonzero tangential rim flux needs. The potential
// is pinned during the solve and returned with quadrature mean zero.
//
// The normal matrix depends only on the grid, so one instance amortizes the
// factorization over many right-hand sides.
//
// rim_taper > 0 multiplies the per-node fit weight by
// max(min(1, dist_to_rim / rim_taper)^2, 1e-6): data inside that band barely
// constrains the potential. The rim band mixes one-sided stencils with the
// staircase sampling of boundary values, and a uniform-weight fit would chase
// that noise and drag the potential off in the bulk, exactly where the fit is
// supposed to be faithful.
class PerpPotentialFit {
 public:
  explicit PerpPotentialFit(const DiskGrid& g, double rim_taper = 0.0);
  ~PerpPotentialFit();

  // defect_l2 (optional) receives the fit-weighted L2 norm of perp_grad e - v.
  ScalarField fit(const VecField& v, double* defect_l2 = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// V = grad d + perp_grad e per component, with d zero-trace and e the
// least-squares potential of the remainder. residual = L2 norm of
// V - grad d - perp_grad e over all components.
struct HodgeData {
  MapField d;
  MapField e;
  double residual = 0.0;
};

HodgeData hodge_decompose(const std::vector<VecField>& v);
HodgeData hodge_decompose(const VecField& v);

}  // namespace disklab
