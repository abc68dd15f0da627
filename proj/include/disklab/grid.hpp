#pragma once

#include <vector>

#include "disklab/vec2.hpp"

namespace disklab {

enum class NodeClass : unsigned char { Interior, Boundary, Exterior };

// Uniform Cartesian grid covering [-1,1]^2, masked to the closed unit disk.
// Nodes split into three classes by distance from the origin:
//   Interior:  |x| <  1 - h/2      (PDE unknowns, full quadrature weight)
//   Boundary:  1 - h/2 <= |x| <= 1 + h/2  (carries trace data at x/|x|, half weight)
//   Exterior:  otherwise            (never touched)
// Every Interior node has its four axis neighbours Interior or Boundary, so
// centred stencils never read Exterior values.
class DiskGrid {
 public:
  // nodes_per_axis must be odd and >= 17 so the origin is a node and the
  // boundary band is resolved.
  explicit DiskGrid(int nodes_per_axis);

  int n() const { return n_; }
  double spacing() const { return h_; }

  int index(int i, int j) const { return i * n_ + j; }
  Vec2 node(int i, int j) const { return {-1.0 + i * h_, -1.0 + j * h_}; }

  NodeClass node_class(int i, int j) const { return cls_[index(i, j)]; }
  NodeClass node_class(int idx) const { return cls_[idx]; }
  bool in_domain(int i, int j) const {
    return i >= 0 && i < n_ && j >= 0 && j < n_ &&
           cls_[index(i, j)] != NodeClass::Exterior;
  }
  bool is_interior(int i, int j) const {
    return i >= 0 && i < n_ && j >= 0 && j < n_ &&
           cls_[index(i, j)] == NodeClass::Interior;
  }

  // For Boundary nodes: the radial projection x/|x| where trace data lives.
  // Identity for other classes.
  Vec2 trace_point(int i, int j) const;

  // Quadrature weight: h^2 on Interior, h^2/2 on Boundary, 0 on Exterior.
  double quad_weight(int idx) const { return weight_[idx]; }
  double quad_weight(int i, int j) const { return weight_[index(i, j)]; }

  // Flattened indices, row-major (i outer), in increasing order.
  const std::vector<int>& interior() const { return interior_; }
  const std::vector<int>& boundary() const { return boundary_; }

  int interior_count() const { return static_cast<int>(interior_.size()); }
  int boundary_count() const { return static_cast<int>(boundary_.size()); }

 private:
  int n_;
  double h_;
  std::vector<NodeClass> cls_;
  std::vector<double> weight_;
  std::vector<int> interior_;
  std::vector<int> boundary_;
};

}  // namespace disklab
