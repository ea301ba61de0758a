#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace simplexstab {

struct SuiteCheck {
  std::string name;
  bool passed = false;
  int trials = 0;
  int violations = 0;
  double worst_margin = 0;  // smallest margin seen; >= 0 when the property held
  std::string detail;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  bool quick = false;
};

// End-to-end property suite over every module. Quick mode cuts sample and
// trial counts by roughly an order of magnitude.
std::vector<SuiteCheck> run_suite(const SuiteConfig& config);

}  // namespace simplexstab
