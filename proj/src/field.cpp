#include "disklab/field.hpp"

namespace disklab {

ScalarField ScalarField::sample(const DiskGrid& g,
                                const std::function<double(Vec2)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const NodeClass c = g.node_class(i, j);
      if (c == NodeClass::Exterior) continue;
      const Vec2 p = (c == NodeClass::Boundary) ? g.trace_point(i, j) : g.node(i, j);
      out(i, j) = f(p);
    }
  }
  return out;
}

}  // namespace disklab
