#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dirac/subspace.hpp"

namespace dirac {

/// A randomized property over cases of a given size. Returns an empty
/// optional on success, otherwise a description of the failing case.
using PropertyFn = std::function<std::optional<std::string>(std::mt19937_64&, Index size)>;

struct Suite {
  std::string name;
  int cases;
  Index max_size;
  PropertyFn property;
};

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  /// Smallest failing case found after shrinking.
  std::optional<std::string> failure;
};

/// Runs `cases` cases with sizes cycling through 1..max_size. On failure,
/// retries smaller sizes to report a minimal failing case.
SuiteResult run_suite(const Suite& suite, std::uint64_t seed);

std::vector<Suite> builtin_suites();

}  // namespace dirac
