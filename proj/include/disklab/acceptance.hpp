#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace disklab {

// One verification check: a stable id, the outcome, and a short account of
// the measured numbers against their frozen bounds.
struct CheckResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the verification suite in a fixed order, printing one line per check
// to *log as it completes (pass nullptr for silence). A check that throws is
// reported as failed with the exception text; the suite always runs to the
// end. Every tolerance is a literal in the implementation, not a knob.
std::vector<CheckResult> run_acceptance(std::ostream* log = nullptr);

}  // namespace disklab
