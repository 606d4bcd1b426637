#pragma once

#include <string>
#include <vector>

namespace pathwise {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Runs the full acceptance suite (14 criteria).  Worker count is capped by the
// PATHWISE_QV_THREADS environment variable when set.
std::vector<CriterionResult> run_acceptance();

// Worker cap derived from hardware and PATHWISE_QV_THREADS.
unsigned worker_count();

}  // namespace pathwise
