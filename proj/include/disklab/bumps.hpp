#pragma once

namespace disklab {

// Radial profile: amplitude * scale on [0, plateau_r], quintic-smoothstep
// falloff to zero at support_r, zero beyond. C^2 on the half-line.
struct RadialBump {
  double plateau_r = 0.0;
  double support_r = 0.0;
  double amplitude = 1.0;
  double scale = 1.0;  // exact renormalization factor

  double operator()(double r) const;
  double deriv(double r) const;
  double grad_linf() const;  // max |d/dr|
};

// 2D integral over the plane (the profile is supported well inside the unit
// disk), high-order radial quadrature.
double disk_integral(const RadialBump& b);

struct BumpPair {
  RadialBump phi;    // averaging profile: value 2 inside r = 3/8, support
                     // inside r = 1/2, unit integral, |d/dr| <= 100
  RadialBump theta;  // dyadic counter: 1 inside r = 1/16, support inside 1/8
};

// Builds the pair and re-verifies every stated property, throwing on failure.
BumpPair make_bumps();

}  // namespace disklab
