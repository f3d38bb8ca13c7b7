#include "infdl/engine.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <sstream>

namespace infdl {

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (std::size_t i = 0; i < diags.size(); ++i) os << (i ? "\n" : "") << diags[i].str();
  return os.str();
}

constexpr long kMissing = LONG_MIN;  // constant outside the domain
constexpr long kNoArg = LONG_MIN + 1;

// Membership test for EDB tuples over domain indices.
class TupleIndex {
 public:
  TupleIndex() = default;
  TupleIndex(const Relation& rel, const Database& db) : arity_(rel.arity), n_(db.size()) {
    std::size_t cells = 1;
    flat_ = true;
    for (std::size_t i = 0; i < arity_; ++i) {
      if (n_ != 0 && cells > (std::size_t{1} << 24) / n_) {
        flat_ = false;
        break;
      }
      cells *= n_;
    }
    if (flat_) bits_.assign(cells, false);
    for (const auto& t : rel.tuples) {
      std::vector<std::size_t> ids;
      for (const auto& c : t) ids.push_back(*db.index_of(c));
      if (flat_) {
        bits_[key(ids)] = true;
      } else {
        set_.insert(ids);
      }
    }
  }

  bool contains(const std::vector<std::size_t>& ids) const {
    if (flat_) return !bits_.empty() && bits_[key(ids)];
    return set_.count(ids) != 0;
  }

 private:
  std::size_t key(const std::vector<std::size_t>& ids) const {
    std::size_t k = 0;
    for (auto i : ids) k = k * n_ + i;
    return k;
  }

  std::size_t arity_ = 0;
  std::size_t n_ = 0;
  bool flat_ = true;
  std::vector<bool> bits_;
  std::set<std::vector<std::size_t>> set_;
};

}  // namespace

struct EvaluationContext::Compiled {
  struct Lit {
    bool negated = false;
    bool edb = false;
    std::size_t target = 0;  // EDB index or slot
    std::vector<long> args;  // >= 0 variable, < 0 constant -(id+1), kMissing
    std::size_t ready = 0;   // number of bound variables needed
  };
  struct CRule {
    std::size_t head = 0;
    long head_arg = kNoArg;
    std::size_t vars = 0;
    std::vector<Lit> lits;  // sorted by ready
  };

  std::vector<std::string> slot_names;
  std::map<std::string, std::size_t> slot_of;
  std::vector<std::size_t> slot_arity;
  std::vector<bool> slot_is_param;
  std::vector<TupleIndex> edbs;
  std::vector<std::vector<CRule>> rules;  // by head slot
  std::size_t n = 0;
};

AnalysisError::AnalysisError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_diagnostics(diags)), diags_(std::move(diags)) {}

EvaluationContext::EvaluationContext(const Program& program, const Database& db,
                                     Interpretation fixed_params)
    : program_(program), db_(db), params_(std::move(fixed_params)),
      compiled_(std::make_unique<Compiled>()) {
  Compiled& c = *compiled_;
  c.n = db.size();

  auto add_slot = [&](const std::string& name, bool param) {
    c.slot_of[name] = c.slot_names.size();
    c.slot_names.push_back(name);
    c.slot_arity.push_back(program.arity(name).value_or(1));
    c.slot_is_param.push_back(param);
  };
  for (const auto& i : program.idbs()) add_slot(i, false);
  for (const auto& p : program.parameters) add_slot(p, true);

  for (const auto& [name, value] : params_.values)
    if (!program.is_parameter(name))
      throw std::invalid_argument("'" + name + "' is not a parameter of the program");
  for (const auto& p : program.parameters) {
    auto it = params_.values.find(p);
    if (it == params_.values.end())
      throw std::invalid_argument("no value supplied for parameter '" + p + "'");
    if (it->second.universe() != universe_for(c.slot_arity[c.slot_of[p]], db))
      throw std::invalid_argument("value of parameter '" + p + "' has the wrong universe");
  }

  std::map<std::string, std::size_t> edb_of;
  auto edb_index = [&](const std::string& name, std::size_t arity) {
    auto it = edb_of.find(name);
    if (it != edb_of.end()) return it->second;
    const Relation* rel = db.relation(name);
    if (rel && rel->arity != arity)
      throw std::invalid_argument("EDB '" + name + "' has arity " + std::to_string(rel->arity) +
                                  " in the database but " + std::to_string(arity) +
                                  " in the program");
    Relation empty{arity, {}};
    c.edbs.emplace_back(rel ? *rel : empty, db);
    edb_of[name] = c.edbs.size() - 1;
    return c.edbs.size() - 1;
  };
  auto encode_constant = [&](const std::string& name) -> long {
    auto id = db.index_of(name);
    return id ? -static_cast<long>(*id) - 1 : kMissing;
  };

  c.rules.resize(c.slot_names.size());
  for (const auto& r : program.rules) {
    Compiled::CRule cr;
    cr.head = c.slot_of.at(r.head.predicate);
    std::map<std::string, long> var_id;
    auto encode = [&](const Term& t) -> long {
      if (!t.is_variable()) return encode_constant(t.name);
      auto [it, inserted] = var_id.try_emplace(t.name, static_cast<long>(var_id.size()));
      return it->second;
    };
    // Number variables by their first occurrence in the body.
    for (const auto& l : r.body) {
      Compiled::Lit lit;
      lit.negated = l.negated;
      auto slot = c.slot_of.find(l.atom.predicate);
      if (slot != c.slot_of.end()) {
        lit.target = slot->second;
      } else {
        lit.edb = true;
        lit.target = edb_index(l.atom.predicate, l.atom.args.size());
      }
      for (const auto& t : l.atom.args) {
        long a = encode(t);
        lit.args.push_back(a);
        if (a >= 0) lit.ready = std::max(lit.ready, static_cast<std::size_t>(a) + 1);
      }
      cr.lits.push_back(std::move(lit));
    }
    if (r.head.args.size() > 1)
      throw std::invalid_argument("IDB '" + r.head.predicate + "' has arity " +
                                  std::to_string(r.head.args.size()) + "; heads must be monadic");
    if (!r.head.args.empty()) {
      const Term& t = r.head.args.front();
      if (t.is_variable()) {
        auto it = var_id.find(t.name);
        if (it == var_id.end())
          throw std::invalid_argument("unsafe rule for '" + r.head.predicate + "'");
        cr.head_arg = it->second;
      } else {
        cr.head_arg = encode_constant(t.name);
        if (cr.head_arg == kMissing)
          throw std::invalid_argument("head constant '" + t.name + "' is not in the domain");
      }
    }
    cr.vars = var_id.size();
    std::stable_sort(cr.lits.begin(), cr.lits.end(),
                     [](const auto& a, const auto& b) { return a.ready < b.ready; });
    c.rules[cr.head].push_back(std::move(cr));
  }
}

EvaluationContext::~EvaluationContext() = default;

std::size_t EvaluationContext::arity(const std::string& predicate) const {
  auto it = compiled_->slot_of.find(predicate);
  if (it == compiled_->slot_of.end()) throw std::out_of_range("unknown IDB '" + predicate + "'");
  return compiled_->slot_arity[it->second];
}

ElementSet EvaluationContext::top(const std::string& predicate) const {
  return ElementSet::full(universe_for(arity(predicate), db_));
}

ElementSet EvaluationContext::bottom(const std::string& predicate) const {
  return ElementSet::empty(universe_for(arity(predicate), db_));
}

Interpretation EvaluationContext::initial() const {
  Interpretation i;
  for (const auto& name : program_.idbs()) i.values[name] = bottom(name);
  for (const auto& [name, v] : params_.values) i.values[name] = v;
  return i;
}

std::size_t EvaluationContext::total_applications() const {
  std::size_t t = 0;
  for (const auto& [_, v] : applications) t += v;
  return t;
}

std::size_t algorithm1_bound(const std::vector<std::size_t>& block_sizes, std::size_t n) {
  const std::size_t k = block_sizes.size();
  if (k == 0) return 0;
  auto pow = [](std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
  };
  std::size_t total = block_sizes[0] * n * pow(n + 1, k - 1);
  for (std::size_t j = 2; j <= k; ++j) total += block_sizes[j - 1] * pow(n + 1, k - j + 1);
  return total;
}

Interpretation params_from_database(const Program& program, const Database& db) {
  Interpretation out;
  for (const auto& p : program.parameters) {
    std::size_t arity = program.arity(p).value_or(1);
    ElementSet v(universe_for(arity, db));
    if (const Relation* rel = db.relation(p)) {
      if (rel->arity != arity)
        throw std::invalid_argument("parameter '" + p + "' has arity " +
                                    std::to_string(rel->arity) + " in the database");
      for (const auto& t : rel->tuples) v.insert(arity == 0 ? 0 : *db.index_of(t[0]));
    }
    out.values[p] = std::move(v);
  }
  return out;
}

namespace {

using State = std::vector<ElementSet>;
using Compiled = EvaluationContext::Compiled;

ElementSet derive(const Compiled& c, std::size_t slot, const State& state) {
  ElementSet out(c.slot_arity[slot] == 0 ? 1 : c.n);
  std::vector<std::size_t> assign;
  std::vector<std::size_t> ids;

  auto value = [&](long a) -> std::size_t {
    return a >= 0 ? assign[static_cast<std::size_t>(a)] : static_cast<std::size_t>(-(a + 1));
  };
  auto holds = [&](const Compiled::Lit& l) {
    bool missing = std::find(l.args.begin(), l.args.end(), kMissing) != l.args.end();
    bool truth;
    if (missing) {
      truth = false;
    } else if (l.edb) {
      ids.clear();
      for (long a : l.args) ids.push_back(value(a));
      truth = c.edbs[l.target].contains(ids);
    } else {
      truth = state[l.target].contains(l.args.empty() ? 0 : value(l.args.front()));
    }
    return truth != l.negated;
  };

  for (const auto& r : c.rules[slot]) {
    assign.assign(r.vars, 0);
    std::size_t next_lit = 0;
    // Literals with no variables gate the whole rule.
    bool ok = true;
    while (next_lit < r.lits.size() && r.lits[next_lit].ready == 0) {
      if (!holds(r.lits[next_lit])) ok = false;
      ++next_lit;
    }
    if (!ok) continue;

    std::function<void(std::size_t, std::size_t)> bind = [&](std::size_t depth, std::size_t lit) {
      if (depth == r.vars) {
        out.insert(r.head_arg == kNoArg ? 0 : value(r.head_arg));
        return;
      }
      for (std::size_t v = 0; v < c.n; ++v) {
        assign[depth] = v;
        std::size_t l = lit;
        bool pass = true;
        while (l < r.lits.size() && r.lits[l].ready == depth + 1) {
          if (!holds(r.lits[l])) {
            pass = false;
            break;
          }
          ++l;
        }
        if (!pass) continue;
        while (l < r.lits.size() && r.lits[l].ready == depth + 1) ++l;
        bind(depth + 1, l);
      }
    };
    if (r.vars == 0) {
      out.insert(r.head_arg == kNoArg ? 0 : value(r.head_arg));
    } else {
      bind(0, next_lit);
    }
  }
  return out;
}

class Runner {
 public:
  Runner(EvaluationContext& ctx, const EvalOptions& opt, EvaluationResult& res)
      : ctx_(ctx), c_(ctx.compiled()), opt_(opt), res_(res), n_(ctx.db().size()) {
    state_.resize(c_.slot_names.size());
    for (std::size_t s = 0; s < c_.slot_names.size(); ++s) {
      state_[s] = c_.slot_is_param[s] ? ctx.fixed_params().at(c_.slot_names[s])
                                      : ElementSet(universe(s));
    }
    if (opt_.trace) res_.trace.push_back({"initial", 0, 0, 0, {}, false, snapshot()});
  }

  void run(const AlternationStructure& s) {
    for (std::size_t i = 0; i < s.sccs.size(); ++i) {
      const Scc& scc = s.sccs[i];
      if (scc.mixed() || opt_.nested_for_all) {
        run_nested(i, scc);
      } else {
        run_single_polarity(i, scc);
      }
    }
    for (std::size_t slot = 0; slot < c_.slot_names.size(); ++slot)
      if (!c_.slot_is_param[slot]) res_.answers.values[c_.slot_names[slot]] = state_[slot];
    res_.stats.within_literal_bound = res_.stats.mixed_t_applications <= res_.stats.literal_bound;
  }

 private:
  std::size_t universe(std::size_t slot) const { return c_.slot_arity[slot] == 0 ? 1 : n_; }

  ElementSet constant_for(std::size_t slot, Fixpoint p) const {
    return p == Fixpoint::greatest ? ElementSet::full(universe(slot))
                                   : ElementSet::empty(universe(slot));
  }

  Interpretation snapshot() const {
    Interpretation i;
    for (std::size_t s = 0; s < c_.slot_names.size(); ++s) i.values[c_.slot_names[s]] = state_[s];
    return i;
  }

  std::vector<std::size_t> slots(const std::vector<std::string>& names) const {
    std::vector<std::size_t> out;
    for (const auto& m : names) out.push_back(c_.slot_of.at(m));
    return out;
  }

  ElementSet apply(std::size_t slot, BlockStats& bs) {
    ++ctx_.applications[c_.slot_names[slot]];
    ++res_.stats.t_applications;
    ++bs.t_applications;
    return derive(c_, slot, state_);
  }

  BlockStats& new_block_stats(std::size_t scc, std::size_t block, const Block& b) {
    res_.stats.per_block.push_back({scc, block, b.polarity, b.members, 0, 0});
    return res_.stats.per_block.back();
  }

  // Kleene iteration of one single-polarity SCC, all members simultaneously.
  void run_single_polarity(std::size_t index, const Scc& scc) {
    const Block& block = scc.blocks.front();
    const auto members = slots(scc.members);
    std::size_t stats_index = res_.stats.per_block.size();
    new_block_stats(index, 0, block);
    std::size_t height = 0;
    bool initialized_changed = false;
    for (auto m : members) {
      ElementSet init = constant_for(m, block.polarity);
      initialized_changed |= !(init == state_[m]);
      state_[m] = std::move(init);
      height += universe(m);
    }
    if (opt_.trace && initialized_changed)
      res_.trace.push_back({"init", index, 0, 0, {}, true, snapshot()});

    for (std::size_t round = 1;; ++round) {
      if (round > height + 2)
        throw std::logic_error("stratum did not stabilize; the operator is not monotone");
      BlockStats& bs = res_.stats.per_block[stats_index];
      std::vector<ElementSet> next;
      for (auto m : members) next.push_back(apply(m, bs));
      bool changed = false;
      for (std::size_t i = 0; i < members.size(); ++i) {
        changed |= !(next[i] == state_[members[i]]);
        state_[members[i]] = std::move(next[i]);
      }
      ++bs.iterations;
      if (changed) ++res_.stats.productive_rounds;
      if (opt_.trace) res_.trace.push_back({"round", index, 0, round, {}, changed, snapshot()});
      if (!changed || !scc.recursive) break;
    }
  }

  // Algorithm1: one loop level per block, innermost block = level 0.
  void run_nested(std::size_t index, const Scc& scc) {
    const std::size_t k = scc.blocks.size();
    std::vector<std::vector<std::size_t>> block_slots;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> stats_index;
    for (std::size_t j = 0; j < k; ++j) {
      block_slots.push_back(slots(scc.blocks[j].members));
      sizes.push_back(scc.blocks[j].members.size());
      stats_index.push_back(res_.stats.per_block.size());
      new_block_stats(index, j, scc.blocks[j]);
    }
    const std::size_t before = res_.stats.t_applications;

    std::function<void(std::size_t)> solve = [&](std::size_t j) {
      const Block& block = scc.blocks[j];
      for (auto m : block_slots[j]) state_[m] = constant_for(m, block.polarity);
      if (opt_.trace)
        res_.trace.push_back({"init", index, j, 0, block.members.front(), true, snapshot()});

      std::size_t height = 0;
      for (auto m : block_slots[j]) height += universe(m);
      const bool literal = opt_.mode == LoopMode::literal_bounds;
      const std::size_t iterations = j == 0 ? n_ : n_ + 1;

      for (std::size_t it = 1;; ++it) {
        if (literal && it > iterations) break;
        if (!literal && it > height + 2)
          throw std::logic_error("block did not stabilize; the operator is not monotone");
        if (j > 0) solve(j - 1);
        BlockStats& bs = res_.stats.per_block[stats_index[j]];
        bool changed = false;
        for (auto m : block_slots[j]) {
          ElementSet v = apply(m, bs);
          bool moved = !(v == state_[m]);
          changed |= moved;
          state_[m] = std::move(v);
          if (opt_.trace)
            res_.trace.push_back({"update", index, j, it, c_.slot_names[m], moved, snapshot()});
        }
        ++bs.iterations;
        if (changed) ++res_.stats.productive_rounds;
        if (!literal && !changed) break;
      }
    };
    solve(k - 1);

    if (k > 1) {
      res_.stats.literal_bound += algorithm1_bound(sizes, n_);
      res_.stats.mixed_t_applications += res_.stats.t_applications - before;
    }
  }

  EvaluationContext& ctx_;
  const Compiled& c_;
  const EvalOptions& opt_;
  EvaluationResult& res_;
  std::size_t n_;
  State state_;
};

}  // namespace

Interpretation apply_t(EvaluationContext& ctx, const std::vector<std::string>& heads,
                       const Interpretation& current) {
  const Compiled& c = ctx.compiled();
  State state(c.slot_names.size());
  for (std::size_t s = 0; s < c.slot_names.size(); ++s) {
    state[s] = current.at(c.slot_names[s]);
    if (state[s].universe() != (c.slot_arity[s] == 0 ? 1 : c.n))
      throw std::invalid_argument("value of '" + c.slot_names[s] + "' has the wrong universe");
  }
  Interpretation out = current;
  for (const auto& h : heads) {
    auto it = c.slot_of.find(h);
    if (it == c.slot_of.end() || c.slot_is_param[it->second])
      throw std::invalid_argument("'" + h + "' is not an IDB");
    ++ctx.applications[h];
    out.values[h] = derive(c, it->second, state);
  }
  return out;
}

EvaluationResult eval_stratified(EvaluationContext& ctx, const AlternationStructure& structure,
                                 const EvalOptions& options) {
  if (!structure.stratified)
    throw std::invalid_argument(
        "stratified evaluation requested for a program with mixed lfp/gfp recursion");
  EvaluationResult res;
  Runner(ctx, options, res).run(structure);
  return res;
}

EvaluationResult eval_algorithm1(EvaluationContext& ctx, const AlternationStructure& structure,
                                 const EvalOptions& options) {
  bool any_mixed = std::any_of(structure.sccs.begin(), structure.sccs.end(),
                               [](const Scc& s) { return s.mixed(); });
  if (!any_mixed && !options.nested_for_all)
    throw std::invalid_argument("Algorithm1 requested for a stratified program");
  EvaluationResult res;
  Runner(ctx, options, res).run(structure);
  return res;
}

EvaluationResult eval_queries(const Program& program, const Database& db,
                              const std::set<std::string>& goals, const EvalOptions& options,
                              std::optional<Interpretation> params) {
  auto structure = analyze_program(program);
  if (!structure.diagnostics.empty()) throw AnalysisError(structure.diagnostics);
  for (const auto& g : goals)
    if (!program.is_idb(g)) throw std::invalid_argument("query '" + g + "' is not an IDB");

  EvaluationContext ctx(program, db, params ? *params : params_from_database(program, db));
  EvaluationResult res = structure.stratified && !options.nested_for_all
                             ? eval_stratified(ctx, structure, options)
                             : eval_algorithm1(ctx, structure, options);
  if (!goals.empty()) {
    Interpretation restricted;
    for (const auto& g : goals) restricted.values[g] = res.answers.at(g);
    res.answers = std::move(restricted);
  }
  return res;
}

}  // namespace infdl
