#pragma once

// Modal mu-calculus / CTL front-end: CTL desugaring, syntactic alternation
// depth, compilation to monadic inf-Datalog, and model checking of Kripke
// structures through the engine.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "infdl/engine.hpp"
#include "infdl/formula.hpp"
#include "infdl/model.hpp"

namespace infdl {

/// Unary EDB holding every state; added by model_check and used by compiled
/// rules whose head variable would otherwise be unbound.
inline constexpr const char* kDomainPredicate = "dom@";

/// Successor relations a formula's modalities quantify over. AX needs every
/// relation it ranges over to be declared functional (total and
/// single-valued); positive Datalog cannot express a universal next-step
/// over an arbitrary relation.
struct ModalSignature {
  std::vector<std::string> relations;
  std::set<std::string> functional;

  static ModalSignature all_functional(std::vector<std::string> relations);
};

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replaces CTL operators by their fixpoint characterizations:
///   E(a U b) = mu U. b | (a & EX U)     A(a U b) = mu U. b | (a & AX U)
///   E(a W b) = nu W. b & (a | EX W)     A(a W b) = nu W. b & (a | AX W)
///   EF a = E(true U a)  AF a = A(true U a)  EG a = E(false W a)  AG a = A(false W a)
/// true/false units are simplified inside the expansions only.
FormulaPtr desugar_ctl(const FormulaPtr& f);

std::set<std::string> free_variables(const Formula& f);

/// Longest chain of nested binders of alternating polarity in which each inner
/// binder reaches the outer one without leaving the outer binder's scope: the
/// inner body mentions the outer variable, or a binder in between that does,
/// and so on. 0 without binders.
std::size_t syntactic_alternation_depth(const Formula& f);

struct CompiledFormula {
  Program program;
  std::string root;  // IDB whose answer is the set of satisfying states
};

/// Compositional translation: one IDB per binder (mu untagged, nu tagged),
/// named `<var>@<preorder index>`; auxiliary IDBs `aux@<index>` for compound
/// modal arguments; a `root` IDB when the formula is not a binder. The
/// evaluation order lists dependencies first and, inside an SCC, groups IDBs
/// by alternation rank, so k stays within the alternation depth plus one.
CompiledFormula compile_to_datalog(const FormulaPtr& f, const ModalSignature& sig);

/// Every state has exactly one successor in `relation`.
bool is_total_function(const Database& kripke, const std::string& relation);

/// All binary relations of the structure.
ModalSignature signature_of(const Database& kripke, bool functional);

struct ModelCheckResult {
  ConstantSet states;
  std::optional<bool> holds;  // set when a state was given
  CompiledFormula compiled;
  EvaluationResult evaluation;
};

ModelCheckResult model_check(const FormulaPtr& f, const Database& kripke,
                             const ModalSignature& sig,
                             const std::optional<Constant>& state = std::nullopt,
                             const EvalOptions& options = {});

}  // namespace infdl
