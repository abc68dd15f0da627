#pragma once

#include <functional>
#include <string>
#include <vector>

#include "disklab/field.hpp"

namespace disklab {

// Unit-sphere-valued curve on the circle, parameterized by angle. Values are
// imposed on Boundary nodes at their radial projection x/|x|.
class BoundaryTrace {
 public:
  using Fn = std::function<std::vector<double>(double)>;

  BoundaryTrace(int dim, Fn fn) : n_(dim), fn_(std::move(fn)) {}

  int dim() const { return n_; }
  std::vector<double> at_angle(double theta) const { return fn_(theta); }

  // Boundary values of one component as a ScalarField (zero elsewhere).
  ScalarField component_field(const DiskGrid& g, int c) const;
  // Sets all components of u on Boundary nodes.
  void impose(MapField& u) const;

  // max over boundary nodes of | |g(theta)| - 1 |
  double unit_defect(const DiskGrid& g) const;
  // max over angularly adjacent boundary nodes of |jump| / |angle gap|
  double angular_lipschitz(const DiskGrid& g) const;

  // Boundary curve of the rational sphere cap: the inverse stereographic
  // image of the circle of radius lambda. lambda = 0 degenerates to the
  // constant south pole.
  static BoundaryTrace cap(double lambda);
  static BoundaryTrace constant(std::vector<double> p);

  // CSV round trip, header "theta,v0,..". Imported values are interpolated
  // linearly in angle and projected back to the sphere.
  static BoundaryTrace from_csv(const std::string& path, int dim);
  void to_csv(const std::string& path, int samples = 720) const;

 private:
  int n_;
  Fn fn_;
};

// The closed-form cap map on the whole disk: inverse stereographic image of
// lambda * (x + iy). Harmonic as a sphere-valued map; Dirichlet energy
// 4 pi lambda^2 / (1 + lambda^2).
MapField cap_map(const DiskGrid& g, double lambda);
double cap_energy(double lambda);

}  // namespace disklab
