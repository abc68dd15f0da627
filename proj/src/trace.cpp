#include "disklab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "disklab/io.hpp"

namespace disklab {

namespace {
constexpr double kPi = 3.14159265358979323846;

double node_angle(const DiskGrid& g, int idx) {
  const Vec2 p = g.node(idx / g.n(), idx % g.n());
  return std::atan2(p.y, p.x);
}
}  // namespace

ScalarField BoundaryTrace::component_field(const DiskGrid& g, int c) const {
  ScalarField out(g);
  for (int idx : g.boundary()) {
    const double th = node_angle(g, idx);
    out[idx] = fn_(th)[c];
  }
  return out;
}

void BoundaryTrace::impose(MapField& u) const {
  const DiskGrid& g = u.grid();
  for (int idx : g.boundary()) {
    const double th = node_angle(g, idx);
    const std::vector<double> v = fn_(th);
    for (int c = 0; c < n_; ++c) u.component(c)[idx] = v[c];
  }
}

double BoundaryTrace::unit_defect(const DiskGrid& g) const {
  double worst = 0.0;
  for (int idx : g.boundary()) {
    const std::vector<double> v = fn_(node_angle(g, idx));
    double s = 0.0;
    for (double c : v) s += c * c;
    worst = std::max(worst, std::fabs(std::sqrt(s) - 1.0));
  }
  return worst;
}

double BoundaryTrace::angular_lipschitz(const DiskGrid& g) const {
  std::vector<double> angles;
  for (int idx : g.boundary()) angles.push_back(node_angle(g, idx));
  std::sort(angles.begin(), angles.end());
  double worst = 0.0;
  const size_t m = angles.size();
  for (size_t k = 0; k < m; ++k) {
    const double a = angles[k];
    const double b = (k + 1 < m) ? angles[k + 1] : angles[0] + 2.0 * kPi;
    const double gap = b - a;
    if (gap < 1e-12) continue;
    const std::vector<double> va = fn_(a), vb = fn_(b);
    double d = 0.0;
    for (int c = 0; c < n_; ++c) d += (vb[c] - va[c]) * (vb[c] - va[c]);
    worst = std::max(worst, std::sqrt(d) / gap);
  }
  return worst;
}

BoundaryTrace BoundaryTrace::cap(double lambda) {
  return BoundaryTrace(3, [lambda](double th) {
    const double den = 1.0 + lambda * lambda;
    return std::vector<double>{2.0 * lambda * std::cos(th) / den,
                               2.0 * lambda * std::sin(th) / den,
                               (lambda * lambda - 1.0) / den};
  });
}

BoundaryTrace BoundaryTrace::constant(std::vector<double> p) {
  const int n = static_cast<int>(p.size());
  return BoundaryTrace(n, [p = std::move(p)](double) { return p; });
}

BoundaryTrace BoundaryTrace::from_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace csv: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace csv: " + path);
  std::vector<std::pair<double, std::vector<double>>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != dim + 1)
      throw std::runtime_error("trace csv row has wrong arity: " + path);
    std::vector<double> v(vals.begin() + 1, vals.end());
    rows.emplace_back(vals[0], std::move(v));
  }
  if (rows.size() < 2) throw std::runtime_error("trace csv needs >= 2 rows: " + path);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return BoundaryTrace(dim, [rows = std::move(rows), dim](double th) {
    const double lo = rows.front().first;
    const double span = 2.0 * kPi;
    while (th < lo) th += span;
    while (th >= lo + span) th -= span;
    size_t k = 0;
    while (k + 1 < rows.size() && rows[k + 1].first <= th) ++k;
    const double a = rows[k].first;
    const double b = (k + 1 < rows.size()) ? rows[k + 1].first : rows.front().first + span;
    const auto& va = rows[k].second;
    const auto& vb = (k + 1 < rows.size()) ? rows[k + 1].second : rows.front().second;
    const double t = (b > a) ? (th - a) / (b - a) : 0.0;
    std::vector<double> v(dim);
    double norm = 0.0;
    for (int c = 0; c < dim; ++c) {
      v[c] = (1.0 - t) * va[c] + t * vb[c];
      norm += v[c] * v[c];
    }
    norm = std::sqrt(norm);
    if (norm > 1e-12)
      for (int c = 0; c < dim; ++c) v[c] /= norm;
    return v;
  });
}

void BoundaryTrace::to_csv(const std::string& path, int samples) const {
  std::string out = "theta";
  for (int c = 0; c < n_; ++c) out += ",v" + std::to_string(c);
  out += "\n";
  for (int k = 0; k < samples; ++k) {
    const double th = -kPi + 2.0 * kPi * k / samples;
    out += fmt_double(th);
    const std::vector<double> v = fn_(th);
    for (int c = 0; c < n_; ++c) out += "," + fmt_double(v[c]);
    out += "\n";
  }
  write_text_file(path, out);
}

MapField cap_map(const DiskGrid& g, double lambda) {
  MapField u(g, 3);
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const NodeClass cl = g.node_class(i, j);
      if (cl == NodeClass::Exterior) continue;
      const Vec2 p = (cl == NodeClass::Boundary) ? g.trace_point(i, j) : g.node(i, j);
      const double w2 = lambda * lambda * p.norm2();
      const double den = 1.0 + w2;
      u.component(0)(i, j) = 2.0 * lambda * p.x / den;
      u.component(1)(i, j) = 2.0 * lambda * p.y / den;
      u.component(2)(i, j) = (w2 - 1.0) / den;
    }
  }
  return u;
}

double cap_energy(double lambda) {
  return 4.0 * kPi * lambda * lambda / (1.0 + lambda * lambda);
}

}  // namespace disklab
