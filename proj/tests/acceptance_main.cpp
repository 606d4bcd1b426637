// Runs the acceptance suite and prints one line per criterion.

#include <cstdio>

#include "pathwise/verify.hpp"

int main() {
  auto results = pathwise::run_acceptance();
  int failures = 0;
  double total = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    total += r.seconds;
    std::printf("[%s] %2d %-42s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
  }
  std::printf("%zu criteria, %d failure%s, %.1fs total\n", results.size(),
              failures, failures == 1 ? "" : "s", total);
  return failures == 0 ? 0 : 1;
}
