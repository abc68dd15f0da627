#include "disklab/green.hpp"

#include <cmath>
#include <stdexcept>

namespace disklab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double green_function(Vec2 x, Vec2 y) {
  const double dist = (x - y).norm();
  if (dist < 1e-14)
    throw std::invalid_argument("green_function: evaluation on the diagonal");
  const double rx = x.norm();
  if (rx == 0.0) return std::log(y.norm()) / (2.0 * kPi);
  // |x/|x| - |x| y|
  const Vec2 m{x.x / rx - rx * y.x, x.y / rx - rx * y.y};
  return (std::log(dist) - std::log(m.norm())) / (2.0 * kPi);
}

double green_superposition(const ScalarField& f, Vec2 x) {
  const DiskGrid& g = f.grid();
  double s = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const double w = g.quad_weight(i, j);
      if (w == 0.0) continue;
      const Vec2 y = g.node(i, j);
      if ((x - y).norm() < 1e-14) continue;
      s += w * green_function(x, y) * f(i, j);
    }
  }
  return s;
}

}  // namespace disklab
