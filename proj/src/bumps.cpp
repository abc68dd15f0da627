#include "disklab/bumps.hpp"

#include <cmath>
#include <stdexcept>

namespace disklab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quintic smoothstep on [0,1]: s(0)=0, s(1)=1, s' = s'' = 0 at both ends.
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

}  // namespace

double RadialBump::operator()(double r) const {
  r = std::fabs(r);
  if (r >= support_r) return 0.0;
  if (r <= plateau_r) return amplitude * scale;
  const double t = (support_r - r) / (support_r - plateau_r);
  return amplitude * scale * smoothstep(t);
}

double RadialBump::deriv(double r) const {
  r = std::fabs(r);
  if (r >= support_r || r <= plateau_r) return 0.0;
  const double w = support_r - plateau_r;
  return -amplitude * scale * smoothstep_deriv((support_r - r) / w) / w;
}

double RadialBump::grad_linf() const {
  // max of smoothstep' is 15/8 at the midpoint
  return amplitude * scale * (15.0 / 8.0) / (support_r - plateau_r);
}

double disk_integral(const RadialBump& b) {
  // composite Simpson on [0, support_r] of 2*pi*r*b(r); the integrand is C^2,
  // 20000 panels push the error far below 1e-12
  const int panels = 20000;
  const double a = 0.0, c = b.support_r;
  const double h = (c - a) / panels;
  double s = 0.0;
  auto f = [&](double r) { return 2.0 * kPi * r * b(r); };
  for (int k = 0; k < panels; ++k) {
    const double r0 = a + k * h;
    s += (f(r0) + 4.0 * f(r0 + 0.5 * h) + f(r0 + h)) * (h / 6.0);
  }
  return s;
}

BumpPair make_bumps() {
  BumpPair out;

  // phi: plateau value 2 out to 3/8, then a quintic falloff whose endpoint is
  // solved so the 2D integral is exactly 1. The root sits near 0.423, which
  // keeps the support inside 1/2 and the slope near 79, inside the 100 cap.
  RadialBump& phi = out.phi;
  phi.amplitude = 2.0;
  phi.plateau_r = 3.0 / 8.0;
  double lo = phi.plateau_r + 1e-6, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    phi.support_r = mid;
    if (disk_integral(phi) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  phi.support_r = 0.5 * (lo + hi);
  phi.scale = 1.0 / disk_integral(phi);  // exact renormalization

  RadialBump& theta = out.theta;
  theta.amplitude = 1.0;
  theta.plateau_r = 1.0 / 16.0;
  theta.support_r = 1.0 / 8.0;

  // re-verify everything the construction promises
  if (std::fabs(disk_integral(phi) - 1.0) > 1e-10)
    throw std::runtime_error("make_bumps: phi integral is off");
  if (std::fabs(phi(0.0) - 2.0) > 1e-9 || std::fabs(phi(3.0 / 8.0) - 2.0) > 1e-9)
    throw std::runtime_error("make_bumps: phi plateau is off");
  if (phi.support_r >= 0.5 || phi(0.5) != 0.0)
    throw std::runtime_error("make_bumps: phi support leaked past 1/2");
  if (phi.grad_linf() > 100.0)
    throw std::runtime_error("make_bumps: phi slope exceeds 100");
  if (theta(1.0 / 16.0) != 1.0 || theta(1.0 / 8.0) != 0.0)
    throw std::runtime_error("make_bumps: theta plateau/support is off");
  return out;
}

}  // namespace disklab
