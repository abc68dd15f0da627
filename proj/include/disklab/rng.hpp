#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace disklab {

// Deterministic splitmix64 stream. All randomness in the lab flows through
// named instances of this so runs are reproducible bit-for-bit.
class Rng {
 public:
  explicit Rng(uint64_t seed) : s_(seed) {}

  // Stable way to derive independent streams per use site.
  Rng(uint64_t seed, const std::string& stream) : s_(seed) {
    for (unsigned char c : stream) s_ = (s_ ^ c) * 0x100000001b3ULL;
    next();
  }

  uint64_t next() {
    s_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal, Box-Muller (consumes two uniforms).
  double normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Uniform on the unit sphere in R^n.
  std::vector<double> unit_vec(int n) {
    std::vector<double> v(n);
    double s = 0.0;
    do {
      s = 0.0;
      for (int c = 0; c < n; ++c) {
        v[c] = normal();
        s += v[c] * v[c];
      }
    } while (s < 1e-12);
    s = std::sqrt(s);
    for (int c = 0; c < n; ++c) v[c] /= s;
    return v;
  }

  // Uniform in the open unit disk (rejection from the square).
  void in_disk(double& x, double& y) {
    do {
      x = uniform(-1.0, 1.0);
      y = uniform(-1.0, 1.0);
    } while (x * x + y * y >= 1.0);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  uint64_t s_;
};

}  // namespace disklab
