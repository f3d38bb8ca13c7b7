#pragma once

// Static analysis: dependency graph, SCCs, alternation blocks and the
// negation restriction.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "infdl/model.hpp"

namespace infdl {

/// Nodes are the program's IDBs in evaluation order. There is an edge a -> b
/// when some rule with head a mentions b (positively or negatively).
struct DependencyGraph {
  std::vector<std::string> nodes;
  std::vector<std::set<std::size_t>> successors;

  std::optional<std::size_t> index_of(const std::string& name) const;
  bool has_edge(const std::string& from, const std::string& to) const;
  std::size_t edge_count() const;
};

struct Block {
  Fixpoint polarity = Fixpoint::least;
  std::vector<std::string> members;  // in evaluation order
};

struct Scc {
  std::vector<std::string> members;  // in evaluation order
  bool recursive = false;            // more than one node, or a self-loop
  std::vector<Block> blocks;         // innermost (evaluated first) to outermost

  bool mixed() const { return blocks.size() > 1; }
  std::size_t k() const { return blocks.size(); }
};

struct AlternationStructure {
  std::vector<Scc> sccs;  // dependencies first
  bool stratified = true;
  std::size_t strata_count = 0;
  std::size_t alternation_depth = 0;  // max k over SCCs
  std::vector<Diagnostic> diagnostics;
};

DependencyGraph build_dependency_graph(const Program& program);

/// Tarjan's algorithm. Components come out dependencies first; roots are
/// visited in node order, so the result is deterministic.
std::vector<std::vector<std::string>> strongly_connected_components(const DependencyGraph& g);

AlternationStructure analyze_alternation(const Program& program, const DependencyGraph& graph);

std::vector<Diagnostic> check_negation_restriction(const Program& program);

/// Everything `evalQueries` needs before evaluation: validation, negation
/// restriction and alternation analysis. Diagnostics collected in the result.
AlternationStructure analyze_program(const Program& program, bool monadic = false);

}  // namespace infdl
