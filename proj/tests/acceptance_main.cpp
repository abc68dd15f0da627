// Runs the acceptance suite and reports one line per check. Exit code is the
// number of failing checks (0 = all green).

#include <iostream>

#include "disklab/acceptance.hpp"

int main() {
  const auto results = disklab::run_acceptance(&std::cout);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  if (failed == 0)
    std::cout << "all " << results.size() << " checks passed" << std::endl;
  else
    std::cout << failed << " of " << results.size() << " checks failed" << std::endl;
  return failed;
}
