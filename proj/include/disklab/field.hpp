#pragma once

#include <functional>
#include <vector>

#include "disklab/grid.hpp"
#include "disklab/vec2.hpp"

namespace disklab {

// One double per node. Values at Boundary nodes are understood as living at
// the radial projection x/|x| of the node, values at Exterior nodes are
// meaningless (kept at zero).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const DiskGrid& g, double init = 0.0)
      : grid_(&g), v_(static_cast<size_t>(g.n()) * g.n(), init) {}

  const DiskGrid& grid() const { return *grid_; }
  bool empty() const { return grid_ == nullptr; }

  double& operator()(int i, int j) { return v_[grid_->index(i, j)]; }
  double operator()(int i, int j) const { return v_[grid_->index(i, j)]; }
  double& operator[](int idx) { return v_[idx]; }
  double operator[](int idx) const { return v_[idx]; }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  // f(position, node class) evaluated on Interior and Boundary nodes;
  // Boundary nodes are evaluated at their trace point.
  static ScalarField sample(const DiskGrid& g,
                            const std::function<double(Vec2)>& f);

 private:
  const DiskGrid* grid_ = nullptr;
  std::vector<double> v_;
};

struct VecField {
  ScalarField x, y;

  VecField() = default;
  explicit VecField(const DiskGrid& g) : x(g), y(g) {}

  const DiskGrid& grid() const { return x.grid(); }
  Vec2 at(int idx) const { return {x[idx], y[idx]}; }
  Vec2 at(int i, int j) const { return {x(i, j), y(i, j)}; }
  void set(int idx, Vec2 v) {
    x[idx] = v.x;
    y[idx] = v.y;
  }
};

// Map into R^m, stored component-major.
class MapField {
 public:
  MapField() = default;
  MapField(const DiskGrid& g, int m) : comp_(m, ScalarField(g)) {}

  int dim() const { return static_cast<int>(comp_.size()); }
  const DiskGrid& grid() const { return comp_.front().grid(); }

  ScalarField& component(int c) { return comp_[c]; }
  const ScalarField& component(int c) const { return comp_[c]; }

  std::vector<double> at(int idx) const {
    std::vector<double> v(comp_.size());
    for (size_t c = 0; c < comp_.size(); ++c) v[c] = comp_[c][idx];
    return v;
  }

 private:
  std::vector<ScalarField> comp_;
};

// n-by-n matrix of scalars per node, entry-major storage.
class MatrixField {
 public:
  MatrixField() = default;
  MatrixField(const DiskGrid& g, int n) : n_(n), e_(n * n, ScalarField(g)) {}

  int dim() const { return n_; }
  const DiskGrid& grid() const { return e_.front().grid(); }

  ScalarField& entry(int r, int c) { return e_[r * n_ + c]; }
  const ScalarField& entry(int r, int c) const { return e_[r * n_ + c]; }

 private:
  int n_ = 0;
  std::vector<ScalarField> e_;
};

}  // namespace disklab
