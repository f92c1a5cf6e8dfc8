#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subsetsum {

struct CheckLine {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckLine> lines;
  bool ok() const {
    for (const auto& l : lines)
      if (!l.ok) return false;
    return true;
  }
};

// Named verification suites behind `sscomp verify`. Seeds drive the Monte
// Carlo comparisons; everything else is deterministic arithmetic.
SuiteReport verify_lambda();
SuiteReport verify_appendix_a();
SuiteReport verify_appendix_b();
SuiteReport verify_omega(std::uint64_t seed);
SuiteReport verify_ratefuncs();
std::vector<SuiteReport> verify_all(std::uint64_t seed);

}  // namespace subsetsum
