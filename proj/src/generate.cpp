#include "infdl/generate.hpp"

#include <algorithm>
#include <set>

namespace infdl::gen {

namespace {

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Literal literal(std::string pred, std::vector<std::string> vars, bool negated = false) {
  Literal l;
  l.negated = negated;
  l.atom.predicate = std::move(pred);
  for (auto& v : vars) l.atom.args.push_back(Term::var(std::move(v)));
  return l;
}

// head(X) <- IDB references at random variables, joined to X through binary
// EDBs, plus optional unary and negated unary EDB literals.
Rule make_rule(Rng& rng, const std::string& head, const std::vector<std::string>& refs) {
  static const std::vector<std::string> vars{"X", "Y", "Z"};
  Rule r;
  r.head.predicate = head;
  r.head.args = {Term::var("X")};
  std::set<std::string> bound;
  std::vector<Literal> idb_lits;
  for (const auto& ref : refs) {
    std::string v = vars[pick(rng, vars.size())];
    if (v != "X" && !bound.count(v)) {
      const auto& rel = kBinaryEdbs[pick(rng, kBinaryEdbs.size())];
      r.body.push_back(coin(rng, 0.7) ? literal(rel, {"X", v}) : literal(rel, {v, "X"}));
      bound.insert(v);
    }
    bound.insert("X");
    idb_lits.push_back(literal(ref, {v}));
  }
  if (refs.empty() || coin(rng, 0.3)) {
    r.body.push_back(literal(kUnaryEdbs[pick(rng, kUnaryEdbs.size())], {"X"}));
    bound.insert("X");
  }
  r.body.insert(r.body.end(), idb_lits.begin(), idb_lits.end());
  if (coin(rng, 0.2)) {
    std::vector<std::string> b(bound.begin(), bound.end());
    r.body.push_back(literal(kUnaryEdbs[pick(rng, kUnaryEdbs.size())], {b[pick(rng, b.size())]}, true));
  }
  return r;
}

Rule init_rule(Rng& rng, const std::string& head) {
  Rule r;
  r.head.predicate = head;
  r.head.args = {Term::var("X")};
  r.body.push_back(literal(kUnaryEdbs[pick(rng, kUnaryEdbs.size())], {"X"}));
  if (coin(rng, 0.3)) {
    r.body.push_back(literal(kBinaryEdbs[pick(rng, kBinaryEdbs.size())], {"X", "Y"}));
    r.body.push_back(literal(kUnaryEdbs[pick(rng, kUnaryEdbs.size())], {"Y"}, coin(rng, 0.5)));
  }
  return r;
}

std::vector<std::string> idb_names(std::size_t I) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= I; ++i) names.push_back("phi" + std::to_string(i));
  return names;
}

// Random composition of `total` into `parts` positive sizes.
std::vector<std::size_t> composition(Rng& rng, std::size_t total, std::size_t parts) {
  std::vector<std::size_t> gaps(total - 1);
  for (std::size_t i = 0; i < gaps.size(); ++i) gaps[i] = i + 1;
  std::shuffle(gaps.begin(), gaps.end(), rng);
  std::vector<std::size_t> cuts(gaps.begin(), gaps.begin() + static_cast<long>(parts - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::size_t> sizes;
  std::size_t prev = 0;
  for (auto c : cuts) {
    sizes.push_back(c - prev);
    prev = c;
  }
  sizes.push_back(total - prev);
  return sizes;
}

}  // namespace

GeneratedProgram alternating_program(Rng& rng, std::size_t I, std::size_t k) {
  if (k < 1 || k > I) throw std::invalid_argument("need 1 <= k <= I");
  GeneratedProgram out;
  out.block_sizes = composition(rng, I, k);
  const auto names = idb_names(I);
  Program& p = out.program;

  Fixpoint polarity = coin(rng, 0.5) ? Fixpoint::least : Fixpoint::greatest;
  std::vector<Fixpoint> pol;
  for (auto m : out.block_sizes) {
    for (std::size_t i = 0; i < m; ++i) pol.push_back(polarity);
    polarity = polarity == Fixpoint::least ? Fixpoint::greatest : Fixpoint::least;
  }

  for (std::size_t i = 0; i < I; ++i) {
    if (pol[i] == Fixpoint::greatest) p.gfp.insert(names[i]);
    if (pol[i] == Fixpoint::least) p.rules.push_back(init_rule(rng, names[i]));
    std::vector<std::string> refs{names[(i + I - 1) % I]};
    if (coin(rng, 0.4)) refs.push_back(names[pick(rng, I)]);
    p.rules.push_back(make_rule(rng, names[i], refs));
    if (coin(rng, 0.4)) p.rules.push_back(make_rule(rng, names[i], {names[pick(rng, I)]}));
  }
  p.order = names;
  p.order_declared = true;
  p.monadic = true;
  return out;
}

GeneratedProgram stratified_program(Rng& rng, std::size_t I) {
  if (I < 1) throw std::invalid_argument("need I >= 1");
  GeneratedProgram out;
  const auto names = idb_names(I);
  Program& p = out.program;
  const auto groups = composition(rng, I, 1 + pick(rng, I));

  std::size_t first = 0;
  for (auto m : groups) {
    const bool gfp = coin(rng, 0.4);
    const bool recursive = m > 1 || coin(rng, 0.7);
    auto earlier_or_same = [&] { return names[pick(rng, first + m)]; };
    for (std::size_t i = first; i < first + m; ++i) {
      if (gfp) p.gfp.insert(names[i]);
      if (!gfp || !recursive) p.rules.push_back(init_rule(rng, names[i]));
      std::vector<std::string> refs;
      if (recursive) refs.push_back(m > 1 ? names[i == first ? first + m - 1 : i - 1] : names[i]);
      if (first > 0 && coin(rng, 0.6)) refs.push_back(names[pick(rng, first)]);
      if (!refs.empty()) p.rules.push_back(make_rule(rng, names[i], refs));
      if (recursive && coin(rng, 0.4)) p.rules.push_back(make_rule(rng, names[i], {earlier_or_same()}));
    }
    first += m;
  }
  p.order = names;
  p.order_declared = true;
  p.monadic = true;
  return out;
}

Database random_database(Rng& rng, std::size_t n, double density) {
  Database db;
  for (std::size_t i = 1; i <= n; ++i) db.add_constant(std::to_string(i));
  for (const auto& u : kUnaryEdbs) {
    db.declare(u, 1);
    for (std::size_t i = 1; i <= n; ++i)
      if (coin(rng, 0.5)) db.add_fact(u, {std::to_string(i)});
  }
  for (const auto& b : kBinaryEdbs) {
    db.declare(b, 2);
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j)
        if (coin(rng, density)) db.add_fact(b, {std::to_string(i), std::to_string(j)});
  }
  return db;
}

namespace {

Database labelled_states(Rng& rng, std::size_t n) {
  Database db;
  for (std::size_t i = 1; i <= n; ++i) db.add_constant(std::to_string(i));
  for (const auto& u : kUnaryEdbs) {
    db.declare(u, 1);
    for (std::size_t i = 1; i <= n; ++i)
      if (coin(rng, 0.5)) db.add_fact(u, {std::to_string(i)});
  }
  return db;
}

}  // namespace

Database random_kripke(Rng& rng, std::size_t n, double density) {
  Database db = labelled_states(rng, n);
  db.declare("r", 2);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (coin(rng, density)) db.add_fact("r", {std::to_string(i), std::to_string(j)});
  return db;
}

std::vector<std::string> functional_relation_names(std::size_t successors) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < successors; ++i) out.push_back("suc" + std::to_string(i));
  return out;
}

Database random_functional_kripke(Rng& rng, std::size_t n, std::size_t successors) {
  Database db = labelled_states(rng, n);
  for (const auto& rel : functional_relation_names(successors)) {
    db.declare(rel, 2);
    for (std::size_t i = 1; i <= n; ++i)
      db.add_fact(rel, {std::to_string(i), std::to_string(1 + pick(rng, n))});
  }
  return db;
}

}  // namespace infdl::gen
