#pragma once

// Brute-force reference semantics used as ground truth in tests.
//
// The oracle shares only the data types with the engine: it evaluates rule
// bodies over constant names and tuple sets, by plain enumeration of all
// variable assignments, and recomputes nested fixpoints recursively.

#include <stdexcept>
#include <string>

#include "infdl/analysis.hpp"
#include "infdl/engine.hpp"

namespace infdl::oracle {

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nested Knaster-Tarski fixpoint: block j is solved by iterating its update
/// from its polarity constant, fully re-solving blocks < j before every step,
/// until the value of block j repeats. stats.t_applications counts single-IDB
/// updates.
EvaluationResult eval_nested(const EvaluationContext& ctx, const AlternationStructure& structure);

inline constexpr std::size_t kEnumerationLimit = 12;

/// Extremal fixpoint by enumeration of every candidate value of the SCC's
/// outer block (and, for k = 2, of its inner block). Requires the SCC of
/// `idb` to have at most two blocks and n * (block size) <= 12 per block.
ConstantSet eval_by_enumeration(const EvaluationContext& ctx, const std::string& idb);

}  // namespace infdl::oracle
