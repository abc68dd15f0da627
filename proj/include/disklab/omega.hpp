#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "disklab/field.hpp"

namespace disklab {

// Antisymmetric n x n matrix of vector fields; only the upper triangle is
// stored. Entries below the diagonal come back negated, the diagonal is zero.
class ConnectionForm {
 public:
  ConnectionForm() = default;  // empty; assign before use
  ConnectionForm(const DiskGrid& g, int n);

  int dim() const { return n_; }
  const DiskGrid& grid() const { return *g_; }

  VecField& entry(int r, int c);              // requires r < c
  const VecField& entry(int r, int c) const;  // requires r < c

  Vec2 at(int r, int c, int idx) const;

  // The antisymmetric matrix of one component (axis 0 = x, 1 = y) at a node.
  Eigen::MatrixXd axis_matrix(int axis, int idx) const;

  // Integral over the disk of the squared Frobenius norm (both components,
  // all n^2 entries).
  double l2_norm_sq() const;
  // Largest pointwise Frobenius norm over domain nodes.
  double linf() const;

 private:
  int tri(int r, int c) const { return r * n_ - r * (r + 1) / 2 + (c - r - 1); }
  const DiskGrid* g_ = nullptr;
  int n_ = 0;
  std::vector<VecField> up_;
};

// Coefficient tensors for connection forms built from gradients of u:
//   Omega^i_j = sum_l f(i,j,l,u) grad u^l + g(i,j,l,u) perp-grad u^l.
// Both callbacks must be antisymmetric in (i,j); assemble_omega spot-checks
// this and refuses tensors that are not.
struct CoeffTensor {
  int n = 0;
  std::function<double(int, int, int, const std::vector<double>&)> f, g;

  static CoeffTensor zero(int n);
  // f(i,j,l) = u^i delta_{jl} - u^j delta_{il}, g = 0. With this tensor
  // assemble_omega reproduces omega_sphere.
  static CoeffTensor sphere(int n);
};

ConnectionForm assemble_omega(const CoeffTensor& t, const MapField& u);

// Omega_ij = u^i grad u^j - u^j grad u^i, the connection form under which
// the sphere harmonic map equation becomes -Laplacian u = Omega . grad u.
ConnectionForm omega_sphere(const MapField& u);

// Right-hand side -2H (d_x u x d_y u) of the constant-mean-curvature system
// (n = 3 only). Satisfies |rhs| <= |H| |grad u|^2 pointwise.
MapField h_surface_rhs(const MapField& u, double H);

}  // namespace disklab
