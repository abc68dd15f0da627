#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace disklab {

// Run parameters shared by the command line tool and the experiment runner.
// Loaded from JSON (strict: unknown keys are rejected), serialized back out
// canonically so runs can be keyed by a stable hash.
struct LabConfig {
  int nodes_per_axis = 129;
  int map_dim = 3;
  std::vector<double> lambdas = {0.05, 0.1, 0.2, 0.3, 0.4};
  uint64_t seed = 1;
  double tol_flow = 1e-3;      // tension residual target for the flow
  double tol_solve = 1e-10;    // linear solver relative residual
  double tol_gauge_rel = 1e-6; // gauge gradient, relative to |Omega|_L2
  double tol_ab = 1e-9;        // fixed point update size for the A/B pair
  double eps_gauge = 8.0;      // refuse the gauge stage when int |Omega|^2
                               // exceeds this (the smallness regime)
  std::string out_dir = "out";

  static LabConfig from_json_file(const std::string& path);
  static LabConfig from_json_text(const std::string& text);

  std::string canonical_json() const;  // fixed key order, round-trip doubles
  std::string hash_hex() const;        // FNV-1a 64 of the canonical form
};

}  // namespace disklab
