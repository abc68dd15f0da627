#include "disklab/omega.hpp"

#include <cmath>
#include <stdexcept>

#include "disklab/calculus.hpp"

namespace disklab {

ConnectionForm::ConnectionForm(const DiskGrid& g, int n) : g_(&g), n_(n) {
  if (n < 2) throw std::invalid_argument("ConnectionForm: need n >= 2");
  up_.reserve(n * (n - 1) / 2);
  for (int k = 0; k < n * (n - 1) / 2; ++k) up_.emplace_back(VecField(g));
}

VecField& ConnectionForm::entry(int r, int c) {
  if (!(0 <= r && r < c && c < n_))
    throw std::invalid_argument("ConnectionForm::entry: need 0 <= r < c < n");
  return up_[tri(r, c)];
}

const VecField& ConnectionForm::entry(int r, int c) const {
  return const_cast<ConnectionForm*>(this)->entry(r, c);
}

Vec2 ConnectionForm::at(int r, int c, int idx) const {
  if (r == c) return {0.0, 0.0};
  if (r < c) return up_[tri(r, c)].at(idx);
  const Vec2 v = up_[tri(c, r)].at(idx);
  return {-v.x, -v.y};
}

Eigen::MatrixXd ConnectionForm::axis_matrix(int axis, int idx) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int r = 0; r < n_; ++r)
    for (int c = r + 1; c < n_; ++c) {
      const Vec2 v = up_[tri(r, c)].at(idx);
      const double e = (axis == 0) ? v.x : v.y;
      m(r, c) = e;
      m(c, r) = -e;
    }
  return m;
}

double ConnectionForm::l2_norm_sq() const {
  double s = 0.0;
  auto add = [&](const std::vector<int>& nodes) {
    for (int idx : nodes) {
      double f2 = 0.0;
      for (const VecField& v : up_) f2 += v.at(idx).norm2();
      s += g_->quad_weight(idx) * 2.0 * f2;  // both triangles
    }
  };
  add(g_->interior());
  add(g_->boundary());
  return s;
}

double ConnectionForm::linf() const {
  double best = 0.0;
  auto scan = [&](const std::vector<int>& nodes) {
    for (int idx : nodes) {
      double f2 = 0.0;
      for (const VecField& v : up_) f2 += v.at(idx).norm2();
      best = std::max(best, std::sqrt(2.0 * f2));
    }
  };
  scan(g_->interior());
  scan(g_->boundary());
  return best;
}

CoeffTensor CoeffTensor::zero(int n) {
  CoeffTensor t;
  t.n = n;
  t.f = [](int, int, int, const std::vector<double>&) { return 0.0; };
  t.g = t.f;
  return t;
}

CoeffTensor CoeffTensor::sphere(int n) {
  CoeffTensor t = zero(n);
  t.f = [](int i, int j, int l, const std::vector<double>& u) {
    double v = 0.0;
    if (j == l) v += u[i];
    if (i == l) v -= u[j];
    return v;
  };
  return t;
}

ConnectionForm assemble_omega(const CoeffTensor& t, const MapField& u) {
  const DiskGrid& g = u.grid();
  const int n = t.n;
  if (n != u.dim())
    throw std::invalid_argument("assemble_omega: tensor and map dimensions differ");

  // antisymmetry spot-check at a few nodes
  {
    const std::vector<int>& in = g.interior();
    for (int s = 0; s < 5; ++s) {
      const int idx = in[(s * in.size()) / 5];
      const std::vector<double> uv = u.at(idx);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) {
            if (std::fabs(t.f(i, j, l, uv) + t.f(j, i, l, uv)) > 1e-12 ||
                std::fabs(t.g(i, j, l, uv) + t.g(j, i, l, uv)) > 1e-12)
              throw std::invalid_argument(
                  "assemble_omega: coefficient tensor is not antisymmetric in (i,j)");
          }
    }
  }

  std::vector<VecField> du, dpu;
  du.reserve(n);
  dpu.reserve(n);
  for (int l = 0; l < n; ++l) {
    du.push_back(grad(u.component(l)));
    dpu.push_back(perp_grad(u.component(l)));
  }

  ConnectionForm om(g, n);
  auto fill = [&](const std::vector<int>& nodes) {
    for (int idx : nodes) {
      const std::vector<double> uv = u.at(idx);
      for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) {
          Vec2 v{0.0, 0.0};
          for (int l = 0; l < n; ++l) {
            const double fc = t.f(r, c, l, uv);
            const double gc = t.g(r, c, l, uv);
            if (fc != 0.0) v = v + fc * du[l].at(idx);
            if (gc != 0.0) v = v + gc * dpu[l].at(idx);
          }
          om.entry(r, c).set(idx, v);
        }
    }
  };
  fill(g.interior());
  fill(g.boundary());
  return om;
}

ConnectionForm omega_sphere(const MapField& u) {
  const DiskGrid& g = u.grid();
  const int n = u.dim();
  std::vector<VecField> du;
  du.reserve(n);
  for (int l = 0; l < n; ++l) du.push_back(grad(u.component(l)));

  ConnectionForm om(g, n);
  auto fill = [&](const std::vector<int>& nodes) {
    for (int idx : nodes) {
      for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) {
          const double ur = u.component(r)[idx], uc = u.component(c)[idx];
          om.entry(r, c).set(idx, ur * du[c].at(idx) - uc * du[r].at(idx));
        }
    }
  };
  fill(g.interior());
  fill(g.boundary());
  return om;
}

MapField h_surface_rhs(const MapField& u, double H) {
  if (u.dim() != 3)
    throw std::invalid_argument("h_surface_rhs: needs a 3-component map");
  const DiskGrid& g = u.grid();
  VecField d0 = grad(u.component(0)), d1 = grad(u.component(1)), d2 = grad(u.component(2));
  MapField rhs(g, 3);
  auto fill = [&](const std::vector<int>& nodes) {
    for (int idx : nodes) {
      const double ax = d0.x[idx], ay = d1.x[idx], az = d2.x[idx];
      const double bx = d0.y[idx], by = d1.y[idx], bz = d2.y[idx];
      rhs.component(0)[idx] = -2.0 * H * (ay * bz - az * by);
      rhs.component(1)[idx] = -2.0 * H * (az * bx - ax * bz);
      rhs.component(2)[idx] = -2.0 * H * (ax * by - ay * bx);
    }
  };
  fill(g.interior());
  fill(g.boundary());
  return rhs;
}

}  // namespace disklab
