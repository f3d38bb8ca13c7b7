#pragma once

// Bound benchmark: random programs with a fixed block structure evaluated in
// literal-bounds mode, measured against the theoretical cost.

#include <cstdint>
#include <string>
#include <vector>

namespace infdl {

struct BenchConfig {
  std::size_t n = 3;  // domain size
  std::size_t k = 2;  // alternation blocks of the generated SCC
  std::size_t I = 2;  // IDB count
  std::uint64_t seed = 1;
  std::size_t trials = 10;

  /// Empty when n >= 0, 1 <= k <= I and trials >= 1.
  std::string validate() const;
};

struct TrialReport {
  std::size_t trial = 0;
  std::vector<std::size_t> block_sizes;
  /// Productive rounds for k = 1 (stratified generation), T applications otherwise.
  std::size_t measured = 0;
  std::size_t bound = 0;
  double ratio = 0;
  bool oracle_checked = false;
  bool oracle_agrees = true;
};

struct BenchReport {
  BenchConfig config;
  std::vector<TrialReport> trials;
  std::size_t violations = 0;
  std::size_t oracle_mismatches = 0;
};

/// Trial t uses its own generator seeded from (seed, t).
BenchReport run_bench(const BenchConfig& config);

}  // namespace infdl
