#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace jetlag::cli {

struct SuiteResult {
  std::string name;
  std::size_t samples = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string failure;  // first failing sample, if any
};

struct CheckReport {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<SuiteResult> suites;

  bool passed() const;
  /// Plain-text report; identical for identical (seed, count).
  std::string render() const;
};

/// Runs the self-check suites on `count` pseudo-random starfish/coral
/// parameter sets and admissible points drawn from `seed`. count must be >= 1.
CheckReport run_checks(std::uint64_t seed, std::size_t count);

}  // namespace jetlag::cli
