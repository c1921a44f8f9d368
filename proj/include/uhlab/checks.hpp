#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uhlab {

// One property check: `worst` is the largest normalized violation seen over
// all samples (negative = the inequality held with margin everywhere).
struct CheckLine {
  std::string suite;
  std::string name;
  int samples = 0;
  int failures = 0;
  double worst = 0;
  double threshold = 0;
  bool pass() const { return failures == 0; }
};

struct CheckSummary {
  std::vector<CheckLine> lines;
  int total_failures() const;
  int total_samples() const;
  bool all_pass() const { return total_failures() == 0; }
};

// available suites (excluding the "all" alias)
std::vector<std::string> check_suites();

// Seeded property suites over randomized nonlinearities, vectors, and
// measured fields. Every sample draws its own generator from (seed, check,
// index), so results are independent of evaluation order. Unknown suite
// names throw std::invalid_argument.
CheckSummary run_checks(const std::string& suite, uint64_t seed, int samples);

} // namespace uhlab
