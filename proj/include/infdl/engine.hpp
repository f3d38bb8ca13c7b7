#pragma once

// Bottom-up evaluation of inf-Datalog programs: the immediate consequence
// operator, the linear stratified evaluator, and Algorithm1 (nested
// iteration over alternating lfp/gfp blocks) with iteration counters.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "infdl/analysis.hpp"
#include "infdl/model.hpp"

namespace infdl {

enum class LoopMode {
  early_exit,      // every loop stops as soon as its block value repeats
  literal_bounds,  // n+1 iterations on outer levels, n on the innermost
};

struct EvalOptions {
  LoopMode mode = LoopMode::early_exit;
  bool trace = false;
  /// Route single-polarity SCCs through the nested-loop evaluator as k=1
  /// instances instead of the stratified loop.
  bool nested_for_all = false;
};

struct BlockStats {
  std::size_t scc = 0;
  std::size_t block = 0;
  Fixpoint polarity = Fixpoint::least;
  std::vector<std::string> members;
  std::size_t t_applications = 0;  // single-IDB operator applications
  std::size_t iterations = 0;      // loop iterations at this block's level
};

struct EvalStats {
  std::size_t t_applications = 0;
  std::size_t productive_rounds = 0;
  std::vector<BlockStats> per_block;
  /// Sum of the Algorithm1 cost formula over mixed SCCs.
  std::size_t literal_bound = 0;
  /// T applications spent in mixed SCCs.
  std::size_t mixed_t_applications = 0;
  bool within_literal_bound = true;
};

struct TraceEntry {
  std::string event;  // "initial", "round", "init", "update"
  std::size_t scc = 0;
  std::size_t block = 0;
  std::size_t iteration = 0;
  std::string predicate;  // "update"/"init" only
  bool changed = false;
  Interpretation snapshot;
};

struct EvaluationResult {
  Interpretation answers;
  EvalStats stats;
  std::vector<TraceEntry> trace;
};

class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Program + database + parameter values, with per-IDB application counters.
/// The program and database must outlive the context.
class EvaluationContext {
 public:
  EvaluationContext(const Program& program, const Database& db, Interpretation fixed_params = {});
  ~EvaluationContext();
  EvaluationContext(const EvaluationContext&) = delete;
  EvaluationContext& operator=(const EvaluationContext&) = delete;

  const Program& program() const { return program_; }
  const Database& db() const { return db_; }
  const Interpretation& fixed_params() const { return params_; }

  std::size_t arity(const std::string& predicate) const;
  ElementSet top(const std::string& predicate) const;
  ElementSet bottom(const std::string& predicate) const;
  /// Interpretation with every IDB at ∅ and parameters at their fixed values.
  Interpretation initial() const;

  std::map<std::string, std::size_t> applications;  // per IDB head
  std::size_t total_applications() const;

  struct Compiled;
  const Compiled& compiled() const { return *compiled_; }

 private:
  const Program& program_;
  const Database& db_;
  Interpretation params_;
  std::unique_ptr<Compiled> compiled_;
};

/// One simultaneous application of the rules whose heads are in `heads`.
/// Every other predicate is copied from `current` unchanged.
Interpretation apply_t(EvaluationContext& ctx, const std::vector<std::string>& heads,
                       const Interpretation& current);

EvaluationResult eval_stratified(EvaluationContext& ctx, const AlternationStructure& structure,
                                 const EvalOptions& options = {});

EvaluationResult eval_algorithm1(EvaluationContext& ctx, const AlternationStructure& structure,
                                 const EvalOptions& options = {});

/// Analyzes, dispatches, and restricts answers to `goals` (all IDBs if empty).
/// Parameter values default to params_from_database.
/// Throws AnalysisError when the program has diagnostics.
EvaluationResult eval_queries(const Program& program, const Database& db,
                              const std::set<std::string>& goals = {},
                              const EvalOptions& options = {},
                              std::optional<Interpretation> params = std::nullopt);

/// The Algorithm1 cost  Σ_{j=2..k} m_j (n+1)^{k-j+1} + m_1 n (n+1)^{k-1}.
std::size_t algorithm1_bound(const std::vector<std::size_t>& block_sizes, std::size_t n);

/// Reads parameter values from same-named database relations (empty if absent).
Interpretation params_from_database(const Program& program, const Database& db);

}  // namespace infdl
