#pragma once

// Shared fixtures, random instances and explicit-state model-checking
// references for the test binaries.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <set>
#include <string>
#include <vector>

#include "infdl/formula.hpp"
#include "infdl/generate.hpp"
#include "infdl/model.hpp"
#include "infdl/parser.hpp"

namespace infdl::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(INFDL_FIXTURES) + "/" + name;
}
inline Program fixture_program(const std::string& name) {
  return parse_program(read_file(fixture_path(name)), name);
}
inline Database fixture_database(const std::string& name) {
  return parse_database(read_file(fixture_path(name)), name);
}
inline Database fixture_kripke(const std::string& name) {
  return parse_kripke(read_file(fixture_path(name)), name);
}

inline ConstantSet set_of(std::initializer_list<const char*> xs) {
  ConstantSet s;
  for (auto x : xs) s.insert(x);
  return s;
}

inline ConstantSet answer(const Interpretation& in, const std::string& idb, const Database& db) {
  return to_constants(in.at(idb), 1, db);
}

// Explicit-state references over a Kripke database.

using Graph = std::map<Constant, std::vector<Constant>>;

inline Graph successors(const Database& k, const std::vector<std::string>& relations) {
  Graph g;
  for (const auto& s : k.domain()) g[s];
  for (const auto& r : relations)
    if (const Relation* rel = k.relation(r))
      for (const auto& t : rel->tuples) g[t[0]].push_back(t[1]);
  return g;
}

inline ConstantSet labelled(const Database& k, const std::string& p) {
  ConstantSet out;
  for (const auto& s : k.domain())
    if (k.holds(p, {s})) out.insert(s);
  return out;
}

/// E(a U b): backward breadth-first search from b-states through a-states.
inline ConstantSet explicit_eu(const Database& k, const std::vector<std::string>& rels,
                               const ConstantSet& a, const ConstantSet& b) {
  Graph pred;
  for (const auto& [s, succ] : successors(k, rels))
    for (const auto& t : succ) pred[t].push_back(s);
  ConstantSet seen = b;
  std::deque<Constant> queue(b.begin(), b.end());
  while (!queue.empty()) {
    Constant t = queue.front();
    queue.pop_front();
    for (const auto& s : pred[t])
      if (a.count(s) && seen.insert(s).second) queue.push_back(s);
  }
  return seen;
}

inline ConstantSet explicit_ef(const Database& k, const std::vector<std::string>& rels,
                               const ConstantSet& target) {
  ConstantSet all(k.domain().begin(), k.domain().end());
  return explicit_eu(k, rels, all, target);
}

/// AG p: every state reachable (forward search, including the start) is a p-state.
inline ConstantSet explicit_ag(const Database& k, const std::vector<std::string>& rels,
                               const ConstantSet& p) {
  Graph g = successors(k, rels);
  ConstantSet out;
  for (const auto& s : k.domain()) {
    ConstantSet seen{s};
    std::deque<Constant> queue{s};
    bool ok = true;
    while (!queue.empty() && ok) {
      Constant x = queue.front();
      queue.pop_front();
      if (!p.count(x)) ok = false;
      for (const auto& y : g[x])
        if (seen.insert(y).second) queue.push_back(y);
    }
    if (ok) out.insert(s);
  }
  return out;
}

/// AF p by counting: a state is added once all of its outgoing edges lead to
/// states already added (states without successors satisfy AX vacuously).
inline ConstantSet explicit_af(const Database& k, const std::vector<std::string>& rels,
                               const ConstantSet& p) {
  Graph g = successors(k, rels);
  Graph pred;
  std::map<Constant, std::size_t> pending;
  for (const auto& [s, succ] : g) {
    pending[s] = succ.size();
    for (const auto& t : succ) pred[t].push_back(s);
  }
  ConstantSet in;
  std::deque<Constant> queue;
  for (const auto& s : k.domain())
    if (p.count(s) || pending[s] == 0) {
      in.insert(s);
      queue.push_back(s);
    }
  while (!queue.empty()) {
    Constant t = queue.front();
    queue.pop_front();
    for (const auto& s : pred[t])
      if (!in.count(s) && --pending[s] == 0) {
        in.insert(s);
        queue.push_back(s);
      }
  }
  return in;
}

/// Random states 1..n with labels p, q, a general relation r and total
/// functions suc0, suc1.
inline Database random_mixed_kripke(gen::Rng& rng, std::size_t n) {
  Database k = gen::random_kripke(rng, n);
  Database f = gen::random_functional_kripke(rng, n, 2);
  for (const auto& name : gen::functional_relation_names(2)) {
    k.declare(name, 2);
    for (const auto& t : f.relation(name)->tuples) k.add_fact(name, t);
  }
  return k;
}

/// Direct set semantics of a desugared formula: fixpoints by Kleene iteration,
/// re-solving inner fixpoints at every outer step. EX and AX without a
/// relation range over `rels`.
inline ConstantSet explicit_mu(const Database& k, const std::vector<std::string>& rels,
                               const Formula& f, std::map<std::string, ConstantSet>& env) {
  const ConstantSet all(k.domain().begin(), k.domain().end());
  auto step_rels = [&](const Formula& g) {
    return g.relation.empty() ? rels : std::vector<std::string>{g.relation};
  };
  switch (f.kind) {
    case FormulaKind::top: return all;
    case FormulaKind::bottom: return {};
    case FormulaKind::prop: return labelled(k, f.name);
    case FormulaKind::neg_prop: {
      ConstantSet out;
      for (const auto& s : all)
        if (!k.holds(f.name, {s})) out.insert(s);
      return out;
    }
    case FormulaKind::var: return env.at(f.name);
    case FormulaKind::conj: {
      ConstantSet a = explicit_mu(k, rels, *f.left, env), b = explicit_mu(k, rels, *f.right, env), out;
      for (const auto& s : a)
        if (b.count(s)) out.insert(s);
      return out;
    }
    case FormulaKind::disj: {
      ConstantSet a = explicit_mu(k, rels, *f.left, env);
      a.merge(explicit_mu(k, rels, *f.right, env));
      return a;
    }
    case FormulaKind::ex:
    case FormulaKind::ax: {
      ConstantSet arg = explicit_mu(k, rels, *f.left, env), out;
      Graph g = successors(k, step_rels(f));
      for (const auto& s : all) {
        const auto& succ = g[s];
        bool ok = f.kind == FormulaKind::ex
                      ? std::any_of(succ.begin(), succ.end(), [&](const Constant& t) { return arg.count(t) > 0; })
                      : std::all_of(succ.begin(), succ.end(), [&](const Constant& t) { return arg.count(t) > 0; });
        if (ok) out.insert(s);
      }
      return out;
    }
    case FormulaKind::mu:
    case FormulaKind::nu: {
      auto saved = env.find(f.name) == env.end() ? std::nullopt : std::optional(env.at(f.name));
      ConstantSet cur = f.kind == FormulaKind::mu ? ConstantSet{} : all;
      while (true) {
        env[f.name] = cur;
        ConstantSet next = explicit_mu(k, rels, *f.left, env);
        if (next == cur) break;
        cur = std::move(next);
      }
      if (saved) env[f.name] = *saved; else env.erase(f.name);
      return cur;
    }
    default: throw std::logic_error("explicit_mu expects a desugared formula");
  }
}

inline ConstantSet explicit_mu(const Database& k, const std::vector<std::string>& rels, const Formula& f) {
  std::map<std::string, ConstantSet> env;
  return explicit_mu(k, rels, f, env);
}

/// Random closed positive formula over p, q. EX may range over every
/// relation; AX names suc0 or suc1 so it only needs those to be functional.
/// `sugar` also draws CTL operators.
inline FormulaPtr random_formula(gen::Rng& rng, std::size_t budget, bool sugar,
                                 std::vector<std::string>& scope) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  if (budget <= 1) {
    std::size_t c = pick(scope.empty() ? 6 : 9);
    switch (c) {
      case 0: return fml::prop("p");
      case 1: return fml::prop("q");
      case 2: return fml::neg_prop("p");
      case 3: return fml::neg_prop("q");
      case 4: return fml::top();
      case 5: return fml::bottom();
      default: return fml::var(scope[pick(scope.size())]);
    }
  }
  const char* succ[] = {"suc0", "suc1"};
  std::size_t c = pick(sugar ? 10 : 7);
  switch (c) {
    case 0: {
      std::size_t l = 1 + pick(budget - 1);
      auto a = random_formula(rng, l, sugar, scope);
      return fml::conj(a, random_formula(rng, budget - l, sugar, scope));
    }
    case 1: {
      std::size_t l = 1 + pick(budget - 1);
      auto a = random_formula(rng, l, sugar, scope);
      return fml::disj(a, random_formula(rng, budget - l, sugar, scope));
    }
    case 2: {
      static const char* rels[] = {"", "r", "suc0", "suc1"};
      return fml::ex(random_formula(rng, budget - 1, sugar, scope), rels[pick(4)]);
    }
    case 3: return fml::ax(random_formula(rng, budget - 1, sugar, scope), succ[pick(2)]);
    case 4:
    case 5: {
      std::string v = "X" + std::to_string(scope.size());
      scope.push_back(v);
      auto body = random_formula(rng, budget - 1, sugar, scope);
      scope.pop_back();
      return c == 4 ? fml::mu(v, body) : fml::nu(v, body);
    }
    case 6: return random_formula(rng, budget - 1, sugar, scope);
    default: {
      static const FormulaKind unary[] = {FormulaKind::ef, FormulaKind::eg};
      static const FormulaKind binary[] = {FormulaKind::eu, FormulaKind::ew};
      if (c == 7 || budget < 3) return fml::unary(unary[pick(2)], random_formula(rng, budget - 1, sugar, scope));
      std::size_t l = 1 + pick(budget - 2);
      auto a = random_formula(rng, l, sugar, scope);
      return fml::binary(binary[pick(2)], a, random_formula(rng, budget - 1 - l, sugar, scope));
    }
  }
}

inline FormulaPtr random_formula(gen::Rng& rng, std::size_t budget, bool sugar = false) {
  std::vector<std::string> scope;
  return random_formula(rng, budget, sugar, scope);
}

/// The same program with IDBs renamed through `names` (others untouched).
inline Program rename_idbs(const Program& p, const std::map<std::string, std::string>& names) {
  auto rn = [&](const std::string& s) {
    auto it = names.find(s);
    return it == names.end() ? s : it->second;
  };
  Program out = p;
  for (auto& r : out.rules) {
    r.head.predicate = rn(r.head.predicate);
    for (auto& l : r.body) l.atom.predicate = rn(l.atom.predicate);
  }
  out.gfp.clear();
  for (const auto& g : p.gfp) out.gfp.insert(rn(g));
  for (auto& o : out.order) o = rn(o);
  return out;
}

struct NegationCase {
  const char* name;
  const char* program;
  bool accepted;
};

/// Programs on both sides of the rule "a negated IDB must be defined by rules
/// whose bodies contain EDB predicates only".
inline const std::vector<NegationCase>& negation_cases() {
  static const std::vector<NegationCase> cases{
      {"edb-negation", "psi(X) <- q(X), ~p(X).\n", true},
      {"negated-edb-only-idb", "phi(X) <- q(X).\npsi(X) <- r(X), ~phi(X).\n", true},
      {"negated-idb-with-negated-edb",
       "phi(X) <- q(X).\nphi(X) <- e(X, Y), ~p(Y).\npsi(X) <- r(X), ~phi(X).\n", true},
      {"negated-gfp-edb-only", ".gfp phi\nphi(X) <- q(X).\npsi(X) <- r(X), ~phi(X).\n", true},
      {"negated-parameter", ".param g\npsi(X) <- r(X), ~g(X).\n", true},
      {"negation-inside-recursion",
       "phi(X) <- q(X), e(X, Y).\npsi(X) <- r(X).\npsi(X) <- e(X, Y), psi(Y), ~phi(Y).\n", true},
      {"negated-recursive-idb",
       "phi(X) <- q(X).\nphi(X) <- e(X, Y), phi(Y).\npsi(X) <- r(X), ~phi(X).\n", false},
      {"negated-idb-over-idb", "a(X) <- q(X).\nb(X) <- a(X).\npsi(X) <- r(X), ~b(X).\n", false},
      {"negated-idb-over-parameter", ".param g\nphi(X) <- g(X).\npsi(X) <- r(X), ~phi(X).\n", false},
      {"self-negation", "psi(X) <- q(X).\npsi(X) <- r(X), ~psi(X).\n", false},
  };
  return cases;
}

}  // namespace infdl::test
