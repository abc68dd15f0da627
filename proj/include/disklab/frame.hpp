#pragma once

#include <Eigen/Dense>
#include <vector>

#include "disklab/field.hpp"

namespace disklab {

// A field of n x n matrices, one per lattice node (node-major, each block
// row-major). Starts as the identity everywhere.
class FrameField {
 public:
  FrameField() = default;  // empty; assign before use
  FrameField(const DiskGrid& g, int n);

  int dim() const { return n_; }
  const DiskGrid& grid() const { return *g_; }

  Eigen::MatrixXd at(int idx) const;
  void set(int idx, const Eigen::MatrixXd& m);

  double* block(int idx) { return a_.data() + static_cast<size_t>(idx) * n_ * n_; }
  const double* block(int idx) const { return a_.data() + static_cast<size_t>(idx) * n_ * n_; }

  // max over domain nodes of the Frobenius norm of R^T R - I
  double orth_defect() const;

  // copy into per-entry scalar fields so the grid calculus applies
  MatrixField as_matrix_field() const;

 private:
  const DiskGrid* g_ = nullptr;
  int n_ = 0;
  std::vector<double> a_;
};

// Nearest-rotation retraction: QR factorization with the diagonal of R made
// positive, so a near-rotation input lands back on SO(n). Throws if the
// result has non-positive determinant.
Eigen::MatrixXd qr_retract(const Eigen::MatrixXd& m);

}  // namespace disklab
