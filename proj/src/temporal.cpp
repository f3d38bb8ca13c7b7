#include "infdl/temporal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "infdl/analysis.hpp"

namespace infdl {

ModalSignature ModalSignature::all_functional(std::vector<std::string> relations) {
  ModalSignature s;
  s.functional.insert(relations.begin(), relations.end());
  s.relations = std::move(relations);
  return s;
}

// ---------------------------------------------------------------------------
// Desugaring

namespace {

FormulaPtr simplified_and(FormulaPtr a, FormulaPtr b) {
  if (a->kind == FormulaKind::top) return b;
  if (b->kind == FormulaKind::top) return a;
  if (a->kind == FormulaKind::bottom || b->kind == FormulaKind::bottom) return fml::bottom();
  return fml::conj(std::move(a), std::move(b));
}

FormulaPtr simplified_or(FormulaPtr a, FormulaPtr b) {
  if (a->kind == FormulaKind::bottom) return b;
  if (b->kind == FormulaKind::bottom) return a;
  if (a->kind == FormulaKind::top || b->kind == FormulaKind::top) return fml::top();
  return fml::disj(std::move(a), std::move(b));
}

FormulaPtr until(bool universal, FormulaPtr a, FormulaPtr b) {
  FormulaPtr next = universal ? fml::ax(fml::var("U")) : fml::ex(fml::var("U"));
  return fml::mu("U", simplified_or(std::move(b), simplified_and(std::move(a), next)));
}

FormulaPtr release(bool universal, FormulaPtr a, FormulaPtr b) {
  FormulaPtr next = universal ? fml::ax(fml::var("W")) : fml::ex(fml::var("W"));
  return fml::nu("W", simplified_and(std::move(b), simplified_or(std::move(a), next)));
}

}  // namespace

FormulaPtr desugar_ctl(const FormulaPtr& f) {
  FormulaPtr l = f->left ? desugar_ctl(f->left) : nullptr;
  FormulaPtr r = f->right ? desugar_ctl(f->right) : nullptr;
  switch (f->kind) {
    case FormulaKind::eu: return until(false, l, r);
    case FormulaKind::au: return until(true, l, r);
    case FormulaKind::ew: return release(false, l, r);
    case FormulaKind::aw: return release(true, l, r);
    case FormulaKind::ef: return until(false, fml::top(), l);
    case FormulaKind::af: return until(true, fml::top(), l);
    case FormulaKind::eg: return release(false, fml::bottom(), l);
    case FormulaKind::ag: return release(true, fml::bottom(), l);
    default: break;
  }
  if (l == f->left && r == f->right) return f;
  auto copy = std::make_shared<Formula>(*f);
  copy->left = l;
  copy->right = r;
  return copy;
}

// ---------------------------------------------------------------------------
// Alternation depth

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  if (f.kind == FormulaKind::var) {
    out.insert(f.name);
    return out;
  }
  if (f.left) out = free_variables(*f.left);
  if (f.right) out.merge(free_variables(*f.right));
  if (is_binder(f.kind)) out.erase(f.name);
  return out;
}

namespace {

// Binders of a closed or open formula, in preorder. Edges run from a binder to
// the binders directly inside its body and to the enclosing binders whose
// variables occur in its body outside nested binders.
class BinderTree {
 public:
  explicit BinderTree(const Formula& f) {
    std::vector<std::pair<std::string, std::size_t>> scope;
    walk(f, std::nullopt, scope);
  }

  std::size_t size() const { return nodes_.size(); }
  const Formula& node(std::size_t i) const { return *nodes_[i]; }
  std::optional<std::size_t> index_of(const Formula* f) const {
    auto it = index_.find(f);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool inside(std::size_t d, std::size_t b) const {
    for (std::optional<std::size_t> c = d; c; c = parent_[*c])
      if (*c == b) return true;
    return false;
  }

  // `from` reaches `to` without leaving the scope of `to`.
  bool reaches_within(std::size_t from, std::size_t to) const {
    std::vector<bool> seen(size());
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      for (std::size_t n : edges_[c]) {
        if (n == to) return true;
        if (seen[n] || !inside(n, to)) continue;
        seen[n] = true;
        stack.push_back(n);
      }
    }
    return false;
  }

  // Strict descendants of b that reach b inside its scope.
  std::vector<std::size_t> dependents(std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t d = b + 1; d < size(); ++d)
      if (inside(d, b) && reaches_within(d, b)) out.push_back(d);
    return out;
  }

 private:
  void walk(const Formula& f, std::optional<std::size_t> owner,
            std::vector<std::pair<std::string, std::size_t>>& scope) {
    if (f.kind == FormulaKind::var) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == f.name) {
          if (owner) edges_[*owner].insert(it->second);
          break;
        }
      return;
    }
    if (is_binder(f.kind)) {
      std::size_t i = nodes_.size();
      nodes_.push_back(&f);
      index_[&f] = i;
      parent_.push_back(owner);
      edges_.emplace_back();
      if (owner) edges_[*owner].insert(i);
      scope.emplace_back(f.name, i);
      walk(*f.left, i, scope);
      scope.pop_back();
      return;
    }
    if (f.left) walk(*f.left, owner, scope);
    if (f.right) walk(*f.right, owner, scope);
  }

  std::vector<const Formula*> nodes_;
  std::map<const Formula*, std::size_t> index_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<std::set<std::size_t>> edges_;
};

}  // namespace

std::size_t syntactic_alternation_depth(const Formula& f) {
  BinderTree tree(f);
  // Descendants carry larger indices, so a reverse sweep sees them first.
  std::vector<std::size_t> chain(tree.size(), 1);
  std::size_t depth = 0;
  for (std::size_t b = tree.size(); b-- > 0;) {
    for (std::size_t d : tree.dependents(b))
      if (tree.node(d).kind != tree.node(b).kind) chain[b] = std::max(chain[b], chain[d] + 1);
    depth = std::max(depth, chain[b]);
  }
  return depth;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

using Conjunct = std::vector<Literal>;
using Dnf = std::vector<Conjunct>;

Literal lit(std::string pred, std::vector<Term> args, bool negated = false) {
  Literal l;
  l.negated = negated;
  l.atom.predicate = std::move(pred);
  l.atom.args = std::move(args);
  return l;
}

std::string variable_name(std::size_t i) {
  static const char* names[] = {"Y", "Z", "W", "V", "U", "T", "S", "R", "Q"};
  constexpr std::size_t count = sizeof(names) / sizeof(names[0]);
  if (i < count) return names[i];
  return std::string(names[i % count]) + std::to_string(i / count);
}

// Renames body variables in first-occurrence order; the head keeps X.
void canonicalize(Rule& r) {
  std::map<std::string, std::string> rename{{"X", "X"}};
  std::size_t next = 0;
  for (auto& l : r.body)
    for (auto& t : l.atom.args) {
      if (!t.is_variable()) continue;
      auto [it, inserted] = rename.try_emplace(t.name, "");
      if (inserted) it->second = variable_name(next++);
      t.name = it->second;
    }
}

class Compiler {
 public:
  explicit Compiler(const ModalSignature& sig) : sig_(sig) {}

  CompiledFormula run(const FormulaPtr& f) {
    number(*f);
    CompiledFormula out;
    if (is_binder(f->kind)) {
      out.root = define_binder(*f);
    } else {
      frames_.push_back({Fixpoint::least, nullptr, {}});
      Dnf body = translate(*f, "X");
      auto aux = std::move(frames_.back().aux);
      frames_.pop_back();
      out.root = "root";
      emit("root", body);
      for (auto& a : aux) program_.order.push_back(a);
      program_.order.push_back("root");
    }
    program_.order_declared = true;
    program_.monadic = true;
    order_by_priority(*f);
    out.program = std::move(program_);
    return out;
  }

 private:
  struct Frame {
    Fixpoint polarity;
    const Formula* binder;  // null at the top level
    std::vector<std::string> aux;
  };

  // Within each SCC, sorts IDBs by a parity priority: a binder ranks at least
  // as high as every descendant reaching it inside its scope, strictly higher
  // when their polarities differ; gfp ranks are even, lfp ranks odd. An
  // auxiliary IDB takes the rank of its binder. Every cycle through a binder's
  // scope keeps its outermost binder on top, so the nested semantics is kept
  // while same-polarity siblings share a block.
  void order_by_priority(const Formula& f) {
    BinderTree tree(f);
    std::vector<std::size_t> rank(tree.size(), 0);
    for (std::size_t b = tree.size(); b-- > 0;) {
      const bool nu = tree.node(b).kind == FormulaKind::nu;
      std::size_t lb = 0;
      for (std::size_t d : tree.dependents(b))
        lb = std::max(lb, rank[d] + (tree.node(d).kind != tree.node(b).kind));
      if (lb % 2 != (nu ? 0u : 1u)) ++lb;
      rank[b] = lb;
    }
    std::map<std::string, std::size_t> position, priority;
    for (std::size_t i = 0; i < program_.order.size(); ++i) {
      const std::string& idb = program_.order[i];
      position[idb] = i;
      const Formula* owner = owner_.count(idb) ? owner_.at(idb) : nullptr;
      priority[idb] = owner ? rank[*tree.index_of(owner)] : 0;
    }
    std::vector<std::string> order;
    for (auto scc : strongly_connected_components(build_dependency_graph(program_))) {
      std::sort(scc.begin(), scc.end(), [&](const std::string& a, const std::string& b) {
        return std::pair(priority[a], position[a]) < std::pair(priority[b], position[b]);
      });
      order.insert(order.end(), scc.begin(), scc.end());
    }
    program_.order = std::move(order);
  }

  void number(const Formula& f) {
    preorder_[&f] = preorder_.size();
    if (f.left) number(*f.left);
    if (f.right) number(*f.right);
  }

  static bool inlinable(const Formula& f) {
    switch (f.kind) {
      case FormulaKind::top:
      case FormulaKind::bottom:
      case FormulaKind::prop:
      case FormulaKind::neg_prop:
      case FormulaKind::var:
      case FormulaKind::mu:
      case FormulaKind::nu:
        return true;
      default:
        return false;
    }
  }

  std::string fresh_var() { return "_v" + std::to_string(var_counter_++); }

  std::vector<std::string> relations_for(const Formula& f, bool universal) const {
    std::vector<std::string> rels =
        f.relation.empty() ? sig_.relations : std::vector<std::string>{f.relation};
    if (universal)
      for (const auto& r : rels)
        if (!sig_.functional.count(r))
          throw CompileError("AX over relation '" + r +
                             "' needs it to be declared functional (total and single-valued)");
    return rels;
  }

  // Body of `f` evaluated at variable `v`, as a disjunction of conjunctions.
  Dnf translate(const Formula& f, const std::string& v) {
    switch (f.kind) {
      case FormulaKind::top: return {{}};
      case FormulaKind::bottom: return {};
      case FormulaKind::prop: return {{lit(f.name, {Term::var(v)})}};
      case FormulaKind::neg_prop: return {{lit(f.name, {Term::var(v)}, true)}};
      case FormulaKind::var: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->first == f.name) return {{lit(it->second, {Term::var(v)})}};
        throw CompileError("free fixpoint variable '" + f.name + "'");
      }
      case FormulaKind::conj: {
        Dnf a = translate(*f.left, v), b = translate(*f.right, v), out;
        for (const auto& x : a)
          for (const auto& y : b) {
            Conjunct c = x;
            for (const auto& l : y)
              if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
            out.push_back(std::move(c));
          }
        return out;
      }
      case FormulaKind::disj: {
        Dnf a = translate(*f.left, v), b = translate(*f.right, v);
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      case FormulaKind::mu:
      case FormulaKind::nu:
        return {{lit(define_binder(f), {Term::var(v)})}};
      case FormulaKind::ex: {
        Dnf out;
        for (const auto& r : relations_for(f, false)) {
          std::string w = fresh_var();
          for (auto& c : argument(*f.left, w)) {
            c.insert(c.begin(), lit(r, {Term::var(v), Term::var(w)}));
            out.push_back(std::move(c));
          }
        }
        return out;
      }
      case FormulaKind::ax: {
        Dnf out{{}};
        std::vector<Conjunct> succ_atoms{{}};
        for (const auto& r : relations_for(f, true)) {
          std::string w = fresh_var();
          Dnf arg = argument(*f.left, w);
          Dnf next;
          for (const auto& c : out)
            for (const auto& a : arg) {
              Conjunct joined = c;
              joined.insert(joined.end(), a.begin(), a.end());
              next.push_back(std::move(joined));
            }
          out = std::move(next);
          succ_atoms.front().push_back(lit(r, {Term::var(v), Term::var(w)}));
        }
        // Successor atoms first, then the argument literals.
        for (auto& c : out) c.insert(c.begin(), succ_atoms.front().begin(), succ_atoms.front().end());
        return out;
      }
      default:
        throw CompileError("CTL operator left after desugaring: " + to_string(f));
    }
  }

  // A modal argument: inlined when atomic, otherwise behind an auxiliary IDB.
  Dnf argument(const Formula& f, const std::string& w) {
    if (inlinable(f)) return translate(f, w);
    return {{lit(define_aux(f), {Term::var(w)})}};
  }

  std::string define_aux(const Formula& f) {
    std::string name = "aux@" + std::to_string(preorder_.at(&f));
    if (defined_.insert(name).second) {
      Dnf body = translate(f, "X");
      emit(name, body);
      Frame& frame = frames_.back();
      owner_[name] = frame.binder;
      if (frame.polarity == Fixpoint::greatest) program_.gfp.insert(name);
      frame.aux.push_back(name);
    }
    return name;
  }

  std::string define_binder(const Formula& f) {
    std::string name = f.name + "@" + std::to_string(preorder_.at(&f));
    if (!defined_.insert(name).second) return name;
    Fixpoint polarity = f.kind == FormulaKind::nu ? Fixpoint::greatest : Fixpoint::least;
    if (polarity == Fixpoint::greatest) program_.gfp.insert(name);
    owner_[name] = &f;
    scope_.emplace_back(f.name, name);
    frames_.push_back({polarity, &f, {}});
    Dnf body = translate(*f.left, "X");
    auto aux = std::move(frames_.back().aux);
    frames_.pop_back();
    scope_.pop_back();
    emit(name, body);
    for (auto& a : aux) program_.order.push_back(a);
    program_.order.push_back(name);
    return name;
  }

  void emit(const std::string& head, const Dnf& body) {
    auto make_head = [&] {
      Atom a;
      a.predicate = head;
      a.args = {Term::var("X")};
      return a;
    };
    if (body.empty()) {
      // Unsatisfiable body: keep the IDB defined by a rule that never fires.
      Rule r;
      r.head = make_head();
      r.body = {lit(kDomainPredicate, {Term::var("X")}),
                lit(kDomainPredicate, {Term::var("X")}, true)};
      pending_rules_[head].push_back(std::move(r));
      flush(head);
      return;
    }
    for (const auto& c : body) {
      Rule r;
      r.head = make_head();
      bool bound = std::any_of(c.begin(), c.end(), [](const Literal& l) {
        return !l.negated && std::any_of(l.atom.args.begin(), l.atom.args.end(),
                                         [](const Term& t) { return t.name == "X"; });
      });
      if (!bound) r.body.push_back(lit(kDomainPredicate, {Term::var("X")}));
      r.body.insert(r.body.end(), c.begin(), c.end());
      canonicalize(r);
      pending_rules_[head].push_back(std::move(r));
    }
    flush(head);
  }

  void flush(const std::string& head) {
    for (auto& r : pending_rules_[head]) program_.rules.push_back(std::move(r));
    pending_rules_.erase(head);
  }

  const ModalSignature& sig_;
  Program program_;
  std::map<const Formula*, std::size_t> preorder_;
  std::map<std::string, const Formula*> owner_;
  std::vector<std::pair<std::string, std::string>> scope_;
  std::vector<Frame> frames_;
  std::set<std::string> defined_;
  std::map<std::string, std::vector<Rule>> pending_rules_;
  std::size_t var_counter_ = 0;
};

}  // namespace

CompiledFormula compile_to_datalog(const FormulaPtr& f, const ModalSignature& sig) {
  FormulaPtr d = desugar_ctl(f);
  if (auto free = free_variables(*d); !free.empty())
    throw CompileError("free fixpoint variable '" + *free.begin() + "'");
  return Compiler(sig).run(d);
}

// ---------------------------------------------------------------------------
// Model checking

bool is_total_function(const Database& kripke, const std::string& relation) {
  const Relation* rel = kripke.relation(relation);
  if (!rel) return kripke.size() == 0;
  if (rel->arity != 2) return false;
  std::map<Constant, std::size_t> out_degree;
  for (const auto& t : rel->tuples) ++out_degree[t[0]];
  return std::all_of(kripke.domain().begin(), kripke.domain().end(),
                     [&](const Constant& s) { return out_degree[s] == 1; });
}

ModalSignature signature_of(const Database& kripke, bool functional) {
  ModalSignature s;
  for (const auto& [name, rel] : kripke.relations())
    if (rel.arity == 2) s.relations.push_back(name);
  if (functional) s.functional.insert(s.relations.begin(), s.relations.end());
  return s;
}

ModelCheckResult model_check(const FormulaPtr& f, const Database& kripke,
                             const ModalSignature& sig, const std::optional<Constant>& state,
                             const EvalOptions& options) {
  if (state && !kripke.index_of(*state))
    throw std::invalid_argument("unknown state '" + *state + "'");
  for (const auto& r : sig.functional)
    if (!is_total_function(kripke, r))
      throw std::invalid_argument("relation '" + r +
                                  "' is declared functional but is not a total function");

  ModelCheckResult out;
  out.compiled = compile_to_datalog(f, sig);

  Database db = kripke;
  db.declare(kDomainPredicate, 1);
  for (const auto& s : kripke.domain()) db.add_fact(kDomainPredicate, {s});

  out.evaluation = eval_queries(out.compiled.program, db, {out.compiled.root}, options);
  out.states = to_constants(out.evaluation.answers.at(out.compiled.root), 1, db);
  if (state) out.holds = out.states.count(*state) != 0;
  return out;
}

}  // namespace infdl
