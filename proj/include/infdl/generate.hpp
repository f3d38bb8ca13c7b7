#pragma once

// Seeded random instances for the bound benchmarks and property tests:
// monadic programs with a prescribed block structure, databases, and Kripke
// structures.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "infdl/model.hpp"

namespace infdl::gen {

using Rng = std::mt19937_64;

/// Unary EDBs `p`, `q` and binary EDBs `e`, `f` used by generated programs.
inline const std::vector<std::string> kUnaryEdbs{"p", "q"};
inline const std::vector<std::string> kBinaryEdbs{"e", "f"};

struct GeneratedProgram {
  Program program;
  /// Block sizes m_1 (innermost) .. m_k of the single mixed SCC; empty for
  /// stratified programs.
  std::vector<std::size_t> block_sizes;
};

/// I monadic IDBs forming one SCC with exactly k alternating blocks
/// (1 <= k <= I). The IDB cycle phi_i <- phi_{i-1}, phi_1 <- phi_I keeps the
/// component strongly connected; every block refers to the one before it.
GeneratedProgram alternating_program(Rng& rng, std::size_t I, std::size_t k);

/// I monadic IDBs split into single-polarity SCCs (no mixed component).
GeneratedProgram stratified_program(Rng& rng, std::size_t I);

/// Domain 1..n with random p, q, e, f.
Database random_database(Rng& rng, std::size_t n, double density = 0.4);

/// States 1..n labelled with random `p`, `q`; one general relation `r`.
Database random_kripke(Rng& rng, std::size_t n, double density = 0.3);

/// States 1..n labelled with random `p`, `q`; `successors` total functions
/// named suc0, suc1, ...
Database random_functional_kripke(Rng& rng, std::size_t n, std::size_t successors);

std::vector<std::string> functional_relation_names(std::size_t successors);

}  // namespace infdl::gen
