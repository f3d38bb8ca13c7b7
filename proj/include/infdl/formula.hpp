#pragma once

// Modal mu-calculus / CTL formula AST.

#include <cstddef>
#include <memory>
#include <string>

#include "infdl/model.hpp"

namespace infdl {

enum class FormulaKind {
  top,
  bottom,
  prop,      // p
  neg_prop,  // !p
  var,       // bound fixpoint variable
  conj,
  disj,
  ex,  // exists-next; `relation` empty = over all successor relations
  ax,  // all-next
  mu,
  nu,
  // CTL sugar, removed by desugar_ctl
  eu,
  au,
  ew,
  aw,
  ef,
  af,
  eg,
  ag,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable AST node. Unary operators and binders use `left`; binary
/// operators (conj, disj, eu, au, ew, aw) use `left` and `right`.
struct Formula {
  FormulaKind kind = FormulaKind::top;
  std::string name;      // proposition, variable, or bound variable of a binder
  std::string relation;  // ex/ax only
  FormulaPtr left;
  FormulaPtr right;
  SourceSpan span;
};

namespace fml {

FormulaPtr top();
FormulaPtr bottom();
FormulaPtr prop(std::string name);
FormulaPtr neg_prop(std::string name);
FormulaPtr var(std::string name);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr ex(FormulaPtr a, std::string relation = {});
FormulaPtr ax(FormulaPtr a, std::string relation = {});
FormulaPtr mu(std::string v, FormulaPtr body);
FormulaPtr nu(std::string v, FormulaPtr body);
FormulaPtr unary(FormulaKind k, FormulaPtr a);
FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b);

}  // namespace fml

bool is_binder(FormulaKind k);
bool is_ctl_sugar(FormulaKind k);

/// Node count.
std::size_t formula_size(const Formula& f);

/// Fully parenthesized surface syntax; reparses to a structurally equal AST.
std::string to_string(const Formula& f);

bool structurally_equal(const Formula& a, const Formula& b);

/// Equality up to renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

}  // namespace infdl
