// One line per acceptance criterion; exits nonzero if any fails.

#include <cstdio>

#include "affinehit/verify.hpp"

int main() {
  using namespace affinehit::verify;
  int failed = 0;
  for (int id = 1; id <= 9; ++id) {
    const Report r = run_criterion(id);
    std::size_t bad = 0;
    for (const auto& c : r.checks) bad += !c.passed;
    std::printf("criterion %d: %s  %s (%zu checks, %zu outside tolerance, %.2f s)\n", id,
                r.passed ? "PASS" : "FAIL", criterion_title(id).c_str(), r.checks.size(), bad,
                r.seconds);
    for (const auto& c : r.checks) {
      if (c.passed) continue;
      std::printf("    %s expected %.12g got %.12g", c.name.c_str(), c.expected, c.got);
      if (c.statistical()) std::printf(" z %.2f", c.z);
      std::printf("\n");
    }
    for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
    std::fflush(stdout);
    failed += !r.passed;
  }
  return failed == 0 ? 0 : 1;
}
