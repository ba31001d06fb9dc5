// Runs the thirteen acceptance checks over the default sweep and prints one line per criterion.
// Exit status is nonzero if any applicable criterion fails its tolerance or time budget.

#include <cstdio>

#include "cmreg/verify.hpp"

int main() {
  using namespace cmreg;
  const auto cells = default_sweep();
  std::printf("acceptance sweep: %zu cells\n", cells.size());
  int failures = 0;
  for (const CriterionResult& r : run_verification(cells)) {
    const char* verdict = !r.applicable ? "SKIP" : (r.pass() ? "PASS" : "FAIL");
    if (r.applicable && !r.pass()) ++failures;
    std::printf("[%s] criterion %2d: %s | worst %.3g, gate %.3g | %.2f s of %.0f s | %s\n", verdict, r.id,
                r.title.c_str(), r.worst, r.gate, r.seconds, r.budget, r.detail.c_str());
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
