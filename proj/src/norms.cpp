#include "disklab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "disklab/calculus.hpp"

namespace disklab {

double lorentz21_norm(const ScalarField& f) {
  const DiskGrid& g = f.grid();
  std::vector<std::pair<double, double>> vw;  // (|value|, weight)
  vw.reserve(g.interior().size() + g.boundary().size());
  for (size_t idx = 0; idx < f.data().size(); ++idx) {
    const double w = g.quad_weight(static_cast<int>(idx));
    if (w != 0.0) vw.emplace_back(std::fabs(f[static_cast<int>(idx)]), w);
  }
  std::sort(vw.begin(), vw.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  // measure{|f| > s} is piecewise constant; integrate sqrt of it exactly.
  double norm = 0.0, cum = 0.0;
  for (size_t k = 0; k < vw.size(); ++k) {
    cum += vw[k].second;
    const double next = (k + 1 < vw.size()) ? vw[k + 1].first : 0.0;
    norm += std::sqrt(cum) * (vw[k].first - next);
  }
  return norm;
}

ScalarField grad_abs(const MapField& u) {
  ScalarField g2 = grad_norm2(u);
  for (double& v : g2.data()) v = std::sqrt(v);
  return g2;
}

}  // namespace disklab
