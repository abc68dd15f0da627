#include "disklab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace disklab {

DiskGrid::DiskGrid(int nodes_per_axis) : n_(nodes_per_axis) {
  if (n_ < 17 || n_ % 2 == 0) {
    throw std::invalid_argument("DiskGrid: nodes_per_axis must be odd and >= 17, got " +
                                std::to_string(n_));
  }
  h_ = 2.0 / (n_ - 1);
  cls_.resize(static_cast<size_t>(n_) * n_);
  weight_.resize(cls_.size(), 0.0);

  const double r_in = 1.0 - 0.5 * h_;
  const double r_out = 1.0 + 0.5 * h_;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double r = node(i, j).norm();
      const int idx = index(i, j);
      if (r < r_in) {
        cls_[idx] = NodeClass::Interior;
        weight_[idx] = h_ * h_;
        interior_.push_back(idx);
      } else if (r <= r_out) {
        cls_[idx] = NodeClass::Boundary;
        weight_[idx] = 0.5 * h_ * h_;
        boundary_.push_back(idx);
      } else {
        cls_[idx] = NodeClass::Exterior;
      }
    }
  }
}

Vec2 DiskGrid::trace_point(int i, int j) const {
  Vec2 p = node(i, j);
  if (node_class(i, j) != NodeClass::Boundary) return p;
  const double r = p.norm();
  return {p.x / r, p.y / r};
}

}  // namespace disklab
