#include "infdl/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "infdl/analysis.hpp"

namespace infdl {

std::string SourceSpan::str() const {
  std::ostringstream os;
  os << (file.empty() ? "<input>" : file);
  if (line > 0) os << ':' << line << ':' << column;
  return os.str();
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  if (span.line > 0 || !span.file.empty()) os << span.str() << ": ";
  os << code << ": " << message;
  return os.str();
}

std::vector<std::string> Rule::variables() const {
  std::vector<std::string> out;
  auto visit = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end())
        out.push_back(t.name);
  };
  visit(head);
  for (const auto& l : body) visit(l.atom);
  return out;
}

// ---------------------------------------------------------------------------
// Program

std::vector<std::string> Program::idbs() const {
  std::vector<std::string> out = order;
  auto add = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (const auto& r : rules) add(r.head.predicate);
  for (const auto& g : gfp) add(g);
  return out;
}

bool Program::is_idb(const std::string& name) const {
  if (gfp.count(name)) return true;
  if (std::find(order.begin(), order.end(), name) != order.end()) return true;
  return std::any_of(rules.begin(), rules.end(),
                     [&](const Rule& r) { return r.head.predicate == name; });
}

bool Program::is_parameter(const std::string& name) const {
  return std::find(parameters.begin(), parameters.end(), name) != parameters.end();
}

Fixpoint Program::tag(const std::string& idb) const {
  return gfp.count(idb) ? Fixpoint::greatest : Fixpoint::least;
}

std::optional<std::size_t> Program::arity(const std::string& name) const {
  for (const auto& r : rules) {
    if (r.head.predicate == name) return r.head.args.size();
    for (const auto& l : r.body)
      if (l.atom.predicate == name) return l.atom.args.size();
  }
  return std::nullopt;
}

std::vector<const Rule*> Program::rules_for(const std::string& head) const {
  std::vector<const Rule*> out;
  for (const auto& r : rules)
    if (r.head.predicate == head) out.push_back(&r);
  return out;
}

std::vector<Predicate> Program::predicates() const {
  std::map<std::string, Predicate> preds;
  auto note = [&](const Atom& a) {
    auto& p = preds[a.predicate];
    p.name = a.predicate;
    p.arity = a.args.size();
  };
  for (const auto& r : rules) {
    note(r.head);
    for (const auto& l : r.body) note(l.atom);
  }
  for (const auto& n : idbs()) {
    auto& p = preds[n];
    if (p.name.empty()) {
      p.name = n;
      p.arity = 1;
    }
  }
  for (const auto& n : parameters) {
    auto& p = preds[n];
    if (p.name.empty()) {
      p.name = n;
      p.arity = 1;
    }
  }
  std::vector<Predicate> out;
  for (auto& [name, p] : preds) {
    if (is_parameter(name)) {
      p.kind = PredicateKind::parameter;
    } else if (is_idb(name)) {
      p.kind = PredicateKind::idb;
      p.tag = tag(name);
    } else {
      p.kind = PredicateKind::edb;
    }
    out.push_back(p);
  }
  return out;
}

void Program::complete_order() {
  for (const auto& r : rules)
    if (std::find(order.begin(), order.end(), r.head.predicate) == order.end())
      order.push_back(r.head.predicate);
  for (const auto& g : gfp)
    if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(g);
}

bool Program::operator==(const Program& o) const {
  return rules == o.rules && gfp == o.gfp && order == o.order && parameters == o.parameters &&
         monadic == o.monadic;
}

// ---------------------------------------------------------------------------
// Database

namespace {

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

bool ConstantLess::operator()(const Constant& a, const Constant& b) const {
  bool ia = is_integer(a), ib = is_integer(b);
  if (ia != ib) return ia;
  if (ia) {
    bool na = a[0] == '-', nb = b[0] == '-';
    if (na != nb) return na;
    std::string_view da(a), db(b);
    if (na) {
      da.remove_prefix(1);
      db.remove_prefix(1);
    }
    while (da.size() > 1 && da[0] == '0') da.remove_prefix(1);
    while (db.size() > 1 && db[0] == '0') db.remove_prefix(1);
    bool less = da.size() != db.size() ? da.size() < db.size() : da < db;
    bool equal = da == db;
    if (equal) return a < b;
    return na ? !less : less;
  }
  return a < b;
}

void Database::add_constant(const Constant& c) {
  auto it = std::lower_bound(domain_.begin(), domain_.end(), c, ConstantLess{});
  if (it != domain_.end() && *it == c) return;
  domain_.insert(it, c);
}

void Database::declare(const std::string& predicate, std::size_t arity) {
  auto [it, inserted] = relations_.try_emplace(predicate);
  if (inserted) {
    it->second.arity = arity;
  } else if (it->second.arity != arity) {
    throw std::invalid_argument("arity conflict for '" + predicate + "': " +
                                std::to_string(it->second.arity) + " vs " +
                                std::to_string(arity));
  }
}

void Database::add_fact(const std::string& predicate, Tuple tuple) {
  declare(predicate, tuple.size());
  for (const auto& c : tuple) add_constant(c);
  relations_[predicate].tuples.insert(std::move(tuple));
}

std::optional<std::size_t> Database::index_of(const Constant& c) const {
  auto it = std::lower_bound(domain_.begin(), domain_.end(), c, ConstantLess{});
  if (it == domain_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - domain_.begin());
}

const Relation* Database::relation(const std::string& name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

bool Database::holds(const std::string& predicate, const Tuple& t) const {
  const Relation* r = relation(predicate);
  return r && r->tuples.count(t) != 0;
}

bool Database::operator==(const Database& o) const {
  if (domain_ != o.domain_) return false;
  auto non_empty = [](const std::map<std::string, Relation>& rs) {
    std::map<std::string, Relation> out;
    for (const auto& [name, r] : rs)
      if (!r.tuples.empty()) out.emplace(name, r);
    return out;
  };
  return non_empty(relations_) == non_empty(o.relations_);
}

// ---------------------------------------------------------------------------
// ElementSet / Interpretation

ElementSet ElementSet::full(std::size_t universe) {
  ElementSet s(universe);
  std::fill(s.bits_.begin(), s.bits_.end(), true);
  return s;
}

std::size_t ElementSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

bool ElementSet::subset_of(const ElementSet& o) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !o.contains(i)) return false;
  return true;
}

std::vector<std::size_t> ElementSet::elements() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

const ElementSet& Interpretation::at(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw std::out_of_range("unassigned predicate '" + name + "'");
  return it->second;
}

bool Interpretation::subset_of(const Interpretation& o) const {
  for (const auto& [name, v] : values) {
    auto it = o.values.find(name);
    if (it == o.values.end() || !v.subset_of(it->second)) return false;
  }
  return true;
}

ConstantSet to_constants(const ElementSet& s, std::size_t arity, const Database& db) {
  ConstantSet out;
  if (arity == 0) {
    if (s.contains(0)) out.insert("true");
    return out;
  }
  for (auto i : s.elements()) out.insert(db.domain().at(i));
  return out;
}

ElementSet from_constants(const ConstantSet& s, const Database& db) {
  ElementSet out(db.size());
  for (const auto& c : s) {
    auto i = db.index_of(c);
    if (!i) throw std::invalid_argument("constant '" + c + "' is not in the domain");
    out.insert(*i);
  }
  return out;
}

std::string format_set(const ElementSet& s, std::size_t arity, const Database& db) {
  if (arity == 0) return s.contains(0) ? "true" : "false";
  std::string out = "{";
  bool first = true;
  for (const auto& c : to_constants(s, arity, db)) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate_program(const Program& program, bool monadic) {
  std::vector<Diagnostic> diags;
  auto diag = [&](std::string code, std::string msg, SourceSpan span = {}) {
    diags.push_back({std::move(code), std::move(msg), std::move(span)});
  };
  monadic = monadic || program.monadic;

  // Arity consistency across all occurrences.
  std::map<std::string, std::size_t> arities;
  auto check_arity = [&](const Atom& a) {
    auto [it, inserted] = arities.try_emplace(a.predicate, a.args.size());
    if (!inserted && it->second != a.args.size())
      diag("arity-conflict",
           "predicate '" + a.predicate + "' used with arity " + std::to_string(a.args.size()) +
               " and " + std::to_string(it->second),
           a.span);
  };

  for (std::size_t i = 0; i < program.rules.size(); ++i) {
    const Rule& r = program.rules[i];
    std::string where = "rule " + std::to_string(i + 1) + " (head '" + r.head.predicate + "')";
    check_arity(r.head);
    for (const auto& l : r.body) check_arity(l.atom);

    if (r.body.empty()) diag("empty-body", where + " has an empty body", r.span);
    if (program.is_parameter(r.head.predicate))
      diag("parameter-head", where + " defines parameter '" + r.head.predicate + "'", r.span);
    if (monadic && r.head.args.size() > 1)
      diag("not-monadic", where + " has head arity " + std::to_string(r.head.args.size()),
           r.span);

    std::set<std::string> bound;
    for (const auto& l : r.body)
      if (!l.negated)
        for (const auto& t : l.atom.args)
          if (t.is_variable()) bound.insert(t.name);
    for (const auto& t : r.head.args)
      if (t.is_variable() && !bound.count(t.name))
        diag("unsafe-rule",
             where + ": head variable " + t.name + " does not occur in a positive body literal",
             r.span);
    for (const auto& l : r.body)
      if (l.negated)
        for (const auto& t : l.atom.args)
          if (t.is_variable() && !bound.count(t.name))
            diag("unsafe-rule",
                 where + ": variable " + t.name + " of negated literal '" + l.atom.predicate +
                     "' is not bound by a positive literal",
                 r.span);
  }

  const auto idbs = program.idbs();
  std::set<std::string> idb_set(idbs.begin(), idbs.end());

  auto has_rules = [&](const std::string& name) {
    return std::any_of(program.rules.begin(), program.rules.end(),
                       [&](const Rule& r) { return r.head.predicate == name; });
  };
  for (const auto& g : program.gfp)
    if (!has_rules(g)) diag("tag-on-edb", "'.gfp " + g + "' names a predicate with no rules");
  for (const auto& n : program.order)
    if (!has_rules(n) && !program.gfp.count(n))
      diag("order-unknown", "'.order' names '" + n + "', which heads no rule");

  for (const auto& p : program.parameters)
    if (idb_set.count(p)) diag("parameter-is-idb", "parameter '" + p + "' is also an IDB");

  // idbOrder must cover every IDB exactly once.
  {
    std::set<std::string> seen;
    for (const auto& n : program.order) {
      if (!seen.insert(n).second) diag("order-duplicate", "'" + n + "' appears twice in .order");
    }
    for (const auto& n : idbs)
      if (!seen.count(n)) diag("order-incomplete", ".order omits IDB '" + n + "'");
  }

  // Untagged IDBs need an initialization rule.
  for (const auto& n : idbs) {
    if (program.tag(n) == Fixpoint::greatest) continue;
    auto rs = program.rules_for(n);
    if (rs.empty()) continue;
    bool all_self = std::all_of(rs.begin(), rs.end(), [&](const Rule* r) {
      return std::any_of(r->body.begin(), r->body.end(),
                         [&](const Literal& l) { return l.atom.predicate == n; });
    });
    if (all_self)
      diag("no-initialization",
           "untagged IDB '" + n + "' has no initialization rule; recursive predicates without "
           "one must be tagged .gfp",
           rs.front()->span);
  }

  // The order must evaluate dependencies before dependents.
  if (diags.empty()) {
    auto graph = build_dependency_graph(program);
    auto sccs = strongly_connected_components(graph);
    std::map<std::string, std::size_t> comp;
    for (std::size_t c = 0; c < sccs.size(); ++c)
      for (const auto& m : sccs[c]) comp[m] = c;
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < program.order.size(); ++i) pos[program.order[i]] = i;
    for (std::size_t a = 0; a < graph.nodes.size(); ++a)
      for (auto b : graph.successors[a]) {
        const auto& from = graph.nodes[a];
        const auto& to = graph.nodes[b];
        if (comp[from] != comp[to] && pos[to] > pos[from])
          diag("order-not-topological", "'" + from + "' depends on '" + to +
                                            "' but precedes it in the evaluation order");
      }
  }

  return diags;
}

// ---------------------------------------------------------------------------
// Grounding

void for_each_assignment(std::size_t vars, std::size_t n,
                         const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> a(vars, 0);
  if (vars == 0) {
    fn(a);
    return;
  }
  if (n == 0) return;
  while (true) {
    fn(a);
    std::size_t i = vars;
    while (i > 0) {
      --i;
      if (++a[i] < n) break;
      a[i] = 0;
      if (i == 0) return;
    }
  }
}

std::vector<Rule> ground_instances(const Rule& rule, const Database& db) {
  const auto vars = rule.variables();
  std::vector<Rule> out;
  for_each_assignment(vars.size(), db.size(), [&](const std::vector<std::size_t>& a) {
    std::map<std::string, Constant> subst;
    for (std::size_t i = 0; i < vars.size(); ++i) subst[vars[i]] = db.domain()[a[i]];
    auto ground = [&](Atom atom) {
      for (auto& t : atom.args)
        if (t.is_variable()) t = Term::constant(subst.at(t.name));
      return atom;
    };
    Rule g = rule;
    g.head = ground(rule.head);
    for (auto& l : g.body) l.atom = ground(l.atom);
    out.push_back(std::move(g));
  });
  return out;
}

}  // namespace infdl
