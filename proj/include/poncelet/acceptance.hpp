#pragma once

// End-to-end property checks over seeded random instances. `full` runs the
// desk-scale sizes (and enforces their time budgets); `quick` runs reduced
// sizes suitable for a smoke test.

#include <cstdint>
#include <string>
#include <vector>

namespace poncelet {

enum class Level { quick, full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, std::uint64_t seed, Level level);

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, Level level, const std::vector<int>& ids = {});

}  // namespace poncelet
