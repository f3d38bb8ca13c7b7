#include "infdl/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <functional>
#include <map>
#include <set>

namespace infdl::oracle {

namespace {

using Value = std::set<Tuple>;
using Env = std::map<std::string, Value>;

class Reference {
 public:
  Reference(const Program& p, const Database& db) : p_(p), db_(db) {}

  std::size_t arity(const std::string& name) const { return p_.arity(name).value_or(1); }

  Value top(const std::string& name) const {
    Value v;
    if (arity(name) == 0) {
      v.insert(Tuple{});
    } else {
      for (const auto& c : db_.domain()) v.insert(Tuple{c});
    }
    return v;
  }

  Value constant(const std::string& name, Fixpoint f) const {
    return f == Fixpoint::greatest ? top(name) : Value{};
  }

  bool literal_true(const Literal& l, const std::map<std::string, Constant>& binding,
                    const Env& env) const {
    Tuple t;
    for (const auto& a : l.atom.args) t.push_back(a.is_variable() ? binding.at(a.name) : a.name);
    bool truth;
    if (auto it = env.find(l.atom.predicate); it != env.end()) {
      truth = it->second.count(t) != 0;
    } else {
      truth = db_.holds(l.atom.predicate, t);
    }
    return truth != l.negated;
  }

  // One application of the rules with head `head`, reading every predicate from `env`.
  Value update(const std::string& head, const Env& env) {
    ++applications;
    Value out;
    for (const auto& r : p_.rules) {
      if (r.head.predicate != head) continue;
      const auto vars = r.variables();
      std::map<std::string, Constant> binding;
      std::function<void(std::size_t)> assign = [&](std::size_t i) {
        if (i == vars.size()) {
          for (const auto& l : r.body)
            if (!literal_true(l, binding, env)) return;
          Tuple h;
          for (const auto& a : r.head.args) h.push_back(a.is_variable() ? binding.at(a.name) : a.name);
          out.insert(std::move(h));
          return;
        }
        for (const auto& c : db_.domain()) {
          binding[vars[i]] = c;
          assign(i + 1);
        }
      };
      assign(0);
    }
    return out;
  }

  // Solves blocks 0..j of `scc` given the current values of everything else.
  void solve(const Scc& scc, std::size_t j, Env& env) {
    const Block& b = scc.blocks[j];
    for (const auto& m : b.members) env[m] = constant(m, b.polarity);
    while (true) {
      if (j > 0) solve(scc, j - 1, env);
      std::map<std::string, Value> next;
      for (const auto& m : b.members) next[m] = update(m, env);
      bool same = std::all_of(b.members.begin(), b.members.end(),
                              [&](const std::string& m) { return next[m] == env[m]; });
      if (same) return;
      for (auto& [m, v] : next) env[m] = std::move(v);
    }
  }

  std::size_t applications = 0;

 private:
  const Program& p_;
  const Database& db_;
};

Env initial_env(const EvaluationContext& ctx, const Reference& ref) {
  Env env;
  for (const auto& [name, v] : ctx.fixed_params().values) {
    Value val;
    for (auto i : v.elements())
      val.insert(ref.arity(name) == 0 ? Tuple{} : Tuple{ctx.db().domain()[i]});
    env[name] = std::move(val);
  }
  for (const auto& i : ctx.program().idbs()) env[i] = {};
  return env;
}

ElementSet to_element_set(const Value& v, std::size_t arity, const Database& db) {
  ElementSet s(universe_for(arity, db));
  for (const auto& t : v) s.insert(arity == 0 ? 0 : *db.index_of(t.at(0)));
  return s;
}

}  // namespace

EvaluationResult eval_nested(const EvaluationContext& ctx, const AlternationStructure& structure) {
  Reference ref(ctx.program(), ctx.db());
  Env env = initial_env(ctx, ref);
  for (const auto& scc : structure.sccs) ref.solve(scc, scc.blocks.size() - 1, env);

  EvaluationResult res;
  for (const auto& i : ctx.program().idbs())
    res.answers.values[i] = to_element_set(env.at(i), ref.arity(i), ctx.db());
  res.stats.t_applications = ref.applications;
  return res;
}

ConstantSet eval_by_enumeration(const EvaluationContext& ctx, const std::string& idb) {
  const Program& p = ctx.program();
  const Database& db = ctx.db();
  if (db.size() > kEnumerationLimit)
    throw InstanceTooLarge("enumeration needs a domain of at most " +
                           std::to_string(kEnumerationLimit) + " elements, got " +
                           std::to_string(db.size()));
  if (!p.is_idb(idb)) throw std::invalid_argument("'" + idb + "' is not an IDB");

  auto structure = analyze_alternation(p, build_dependency_graph(p));
  Reference ref(p, db);
  Env env = initial_env(ctx, ref);

  const Scc* target = nullptr;
  for (const auto& scc : structure.sccs) {
    if (std::find(scc.members.begin(), scc.members.end(), idb) != scc.members.end()) {
      target = &scc;
      break;
    }
    ref.solve(scc, scc.blocks.size() - 1, env);
  }
  if (target->blocks.size() > 2)
    throw std::invalid_argument("enumeration supports at most two alternation blocks");

  // Candidate values of one block, encoded as one bit per (member, element).
  struct Space {
    std::vector<std::string> members;
    std::vector<std::size_t> universe;
    std::size_t bits = 0;
  };
  auto make_space = [&](const Block& b) {
    Space s;
    s.members = b.members;
    for (const auto& m : b.members) {
      s.universe.push_back(ref.arity(m) == 0 ? 1 : db.size());
      s.bits += s.universe.back();
    }
    if (s.bits > kEnumerationLimit)
      throw InstanceTooLarge("block {" + b.members.front() + ", ...} has " +
                             std::to_string(s.bits) + " candidate bits");
    return s;
  };
  auto decode = [&](const Space& s, std::uint64_t mask, Env& e) {
    std::size_t bit = 0;
    for (std::size_t i = 0; i < s.members.size(); ++i) {
      Value v;
      for (std::size_t x = 0; x < s.universe[i]; ++x, ++bit)
        if (mask >> bit & 1u)
          v.insert(ref.arity(s.members[i]) == 0 ? Tuple{} : Tuple{db.domain()[x]});
      e[s.members[i]] = std::move(v);
    }
  };
  auto is_fixpoint = [&](const Space& s, const Env& e) {
    for (const auto& m : s.members)
      if (ref.update(m, e) != e.at(m)) return false;
    return true;
  };
  auto subset = [](std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; };
  auto extremal = [&](const std::vector<std::uint64_t>& fixpoints, Fixpoint f) -> std::uint64_t {
    for (auto c : fixpoints) {
      bool ok = std::all_of(fixpoints.begin(), fixpoints.end(), [&](std::uint64_t o) {
        return f == Fixpoint::least ? subset(c, o) : subset(o, c);
      });
      if (ok) return c;
    }
    throw std::logic_error("no extremal fixpoint; the operator is not monotone");
  };

  const Block& outer_block = target->blocks.back();
  Space outer = make_space(outer_block);
  std::optional<Space> inner;
  if (target->blocks.size() == 2) inner = make_space(target->blocks.front());

  // With the outer candidate decoded into `e`, fixes the inner block at its extremal fixpoint.
  auto solve_inner = [&](Env& e) {
    if (!inner) return;
    std::vector<std::uint64_t> fps;
    for (std::uint64_t d = 0; d < (std::uint64_t{1} << inner->bits); ++d) {
      decode(*inner, d, e);
      if (is_fixpoint(*inner, e)) fps.push_back(d);
    }
    decode(*inner, extremal(fps, target->blocks.front().polarity), e);
  };

  std::vector<std::uint64_t> fps;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << outer.bits); ++c) {
    Env e = env;
    decode(outer, c, e);
    solve_inner(e);
    if (is_fixpoint(outer, e)) fps.push_back(c);
  }
  Env e = env;
  decode(outer, extremal(fps, outer_block.polarity), e);
  solve_inner(e);

  ConstantSet out;
  for (const auto& t : e.at(idb)) out.insert(t.empty() ? Constant("true") : t[0]);
  return out;
}

}  // namespace infdl::oracle
