#pragma once

// Core data model: inf-Datalog programs, finite databases and interpretations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace infdl {

using Constant = std::string;

/// 1-based position in a source file. Line 0 means "no position".
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;

  std::string str() const;
  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  std::string code;  // short stable identifier, e.g. "unsafe-rule"
  std::string message;
  SourceSpan span;

  std::string str() const;
};

enum class Fixpoint { least, greatest };

inline const char* to_string(Fixpoint f) { return f == Fixpoint::least ? "lfp" : "gfp"; }

enum class PredicateKind { edb, idb, parameter };

struct Predicate {
  std::string name;
  std::size_t arity = 0;
  PredicateKind kind = PredicateKind::edb;
  std::optional<Fixpoint> tag;  // set iff kind == idb
};

struct Term {
  enum class Kind { variable, constant };
  Kind kind = Kind::variable;
  std::string name;

  static Term var(std::string n) { return {Kind::variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::constant, std::move(n)}; }
  bool is_variable() const { return kind == Kind::variable; }
  bool operator==(const Term& o) const { return kind == o.kind && name == o.name; }
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  SourceSpan span;

  bool operator==(const Atom& o) const { return predicate == o.predicate && args == o.args; }
};

struct Literal {
  bool negated = false;
  Atom atom;

  bool operator==(const Literal& o) const { return negated == o.negated && atom == o.atom; }
};

struct Rule {
  Atom head;
  std::vector<Literal> body;
  SourceSpan span;

  std::vector<std::string> variables() const;  // distinct, in first-occurrence order
  bool operator==(const Rule& o) const { return head == o.head && body == o.body; }
};

/// A parsed inf-Datalog program.
///
/// The IDB set is the union of rule heads, `.gfp` names and `.order` names;
/// validation requires the latter two to head rules.
/// `order` is the global evaluation order; leftmost is evaluated first
/// (innermost). When no `.order` directive was given the parser synthesizes
/// first-head-occurrence order and leaves `order_declared` false.
struct Program {
  std::vector<Rule> rules;
  std::set<std::string> gfp;
  std::vector<std::string> order;
  bool order_declared = false;
  std::vector<std::string> parameters;
  bool monadic = false;

  std::vector<std::string> idbs() const;  // in evaluation order
  bool is_idb(const std::string& name) const;
  bool is_parameter(const std::string& name) const;
  Fixpoint tag(const std::string& idb) const;
  std::vector<Predicate> predicates() const;  // EDBs, parameters, IDBs; sorted by name
  std::optional<std::size_t> arity(const std::string& name) const;
  std::vector<const Rule*> rules_for(const std::string& head) const;

  /// Fills in `order` with first-head-occurrence order for IDBs it misses.
  void complete_order();

  bool operator==(const Program& o) const;
};

/// Natural ordering of constants: integers numerically first, then names.
struct ConstantLess {
  bool operator()(const Constant& a, const Constant& b) const;
};

using ConstantSet = std::set<Constant, ConstantLess>;
using Tuple = std::vector<Constant>;

struct Relation {
  std::size_t arity = 0;
  std::set<Tuple> tuples;

  bool operator==(const Relation&) const = default;
};

/// A finite relational structure. The domain is kept in natural order so that
/// element indices are stable for a given set of constants.
class Database {
 public:
  Database() = default;

  void add_constant(const Constant& c);
  /// Throws std::invalid_argument on an arity conflict.
  void add_fact(const std::string& predicate, Tuple tuple);
  /// Declares an (possibly empty) relation.
  void declare(const std::string& predicate, std::size_t arity);

  const std::vector<Constant>& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }
  std::optional<std::size_t> index_of(const Constant& c) const;
  const std::map<std::string, Relation>& relations() const { return relations_; }
  const Relation* relation(const std::string& name) const;
  bool holds(const std::string& predicate, const Tuple& t) const;

  /// Same domain and same non-empty relations; an empty relation equals an
  /// absent one.
  bool operator==(const Database& o) const;

 private:
  std::vector<Constant> domain_;
  std::map<std::string, Relation> relations_;
};

/// A subset of a finite universe {0..size-1}. Arity-1 predicates use the
/// database domain as universe; arity-0 predicates use a universe of size 1
/// whose only element means "true".
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe) : bits_(universe, false) {}

  static ElementSet empty(std::size_t universe) { return ElementSet(universe); }
  static ElementSet full(std::size_t universe);

  std::size_t universe() const { return bits_.size(); }
  bool contains(std::size_t i) const { return i < bits_.size() && bits_[i]; }
  void insert(std::size_t i) { bits_.at(i) = true; }
  void erase(std::size_t i) { bits_.at(i) = false; }
  std::size_t count() const;
  bool is_empty() const { return count() == 0; }
  bool subset_of(const ElementSet& o) const;
  std::vector<std::size_t> elements() const;

  bool operator==(const ElementSet&) const = default;

 private:
  std::vector<bool> bits_;
};

/// Values of IDB (and parameter) predicates.
struct Interpretation {
  std::map<std::string, ElementSet> values;

  const ElementSet& at(const std::string& name) const;
  bool has(const std::string& name) const { return values.count(name) != 0; }
  /// Pointwise inclusion over the predicates of *this.
  bool subset_of(const Interpretation& o) const;
  bool operator==(const Interpretation&) const = default;
};

/// Universe used for a predicate of the given arity over `db`.
inline std::size_t universe_for(std::size_t arity, const Database& db) {
  return arity == 0 ? 1 : db.size();
}

/// Element names of an arity-1 value, or {"true"} / {} for arity 0.
ConstantSet to_constants(const ElementSet& s, std::size_t arity, const Database& db);
ElementSet from_constants(const ConstantSet& s, const Database& db);
std::string format_set(const ElementSet& s, std::size_t arity, const Database& db);

/// Checks the program invariants. Empty result iff the program is well formed.
std::vector<Diagnostic> validate_program(const Program& program, bool monadic);

/// All substitutions of the rule's variables by domain constants.
std::vector<Rule> ground_instances(const Rule& rule, const Database& db);

/// Calls `fn` once per assignment of `vars` variables over a domain of size n,
/// in odometer order. Zero variables means one call with an empty assignment.
void for_each_assignment(std::size_t vars, std::size_t n,
                         const std::function<void(const std::vector<std::size_t>&)>& fn);

}  // namespace infdl
