#include "infdl/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace infdl {

std::optional<std::size_t> DependencyGraph::index_of(const std::string& name) const {
  auto it = std::find(nodes.begin(), nodes.end(), name);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

bool DependencyGraph::has_edge(const std::string& from, const std::string& to) const {
  auto a = index_of(from), b = index_of(to);
  return a && b && successors[*a].count(*b);
}

std::size_t DependencyGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : successors) n += s.size();
  return n;
}

DependencyGraph build_dependency_graph(const Program& program) {
  DependencyGraph g;
  g.nodes = program.idbs();
  g.successors.resize(g.nodes.size());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = i;
  for (const auto& r : program.rules) {
    auto from = index.find(r.head.predicate);
    if (from == index.end()) continue;
    for (const auto& l : r.body) {
      auto to = index.find(l.atom.predicate);
      if (to != index.end()) g.successors[from->second].insert(to->second);
    }
  }
  return g;
}

std::vector<std::vector<std::string>> strongly_connected_components(const DependencyGraph& g) {
  const std::size_t n = g.nodes.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::string>> out;
  std::size_t counter = 0;

  std::function<void(std::size_t)> connect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (auto w : g.successors[v]) {
      if (index[w] == unvisited) {
        connect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      std::vector<std::string> names;
      for (auto c : comp) names.push_back(g.nodes[c]);
      out.push_back(std::move(names));
    }
  };

  for (std::size_t v = 0; v < n; ++v)
    if (index[v] == unvisited) connect(v);
  return out;
}

AlternationStructure analyze_alternation(const Program& program, const DependencyGraph& graph) {
  AlternationStructure s;
  for (auto& members : strongly_connected_components(graph)) {
    Scc scc;
    // Node order is evaluation order, and components were sorted by node index.
    scc.members = std::move(members);
    scc.recursive = scc.members.size() > 1 ||
                    graph.has_edge(scc.members.front(), scc.members.front());
    for (const auto& m : scc.members) {
      Fixpoint p = program.tag(m);
      if (scc.blocks.empty() || scc.blocks.back().polarity != p) scc.blocks.push_back({p, {}});
      scc.blocks.back().members.push_back(m);
    }
    if (scc.mixed()) {
      s.stratified = false;
      if (!program.order_declared)
        s.diagnostics.push_back(
            {"order-unspecified",
             "mutually recursive tagged and untagged IDBs {" + [&] {
               std::string j;
               for (const auto& m : scc.members) j += (j.empty() ? "" : ", ") + m;
               return j;
             }() + "} need a declared evaluation order (.order)",
             {}});
    }
    s.alternation_depth = std::max(s.alternation_depth, scc.k());
    s.sccs.push_back(std::move(scc));
  }
  s.strata_count = s.sccs.size();
  return s;
}

std::vector<Diagnostic> check_negation_restriction(const Program& program) {
  std::vector<Diagnostic> diags;
  for (const auto& r : program.rules) {
    for (const auto& l : r.body) {
      if (!l.negated || !program.is_idb(l.atom.predicate)) continue;
      const auto& target = l.atom.predicate;
      auto defs = program.rules_for(target);
      bool edb_only = true;
      for (const Rule* d : defs)
        for (const auto& dl : d->body)
          if (program.is_idb(dl.atom.predicate) || program.is_parameter(dl.atom.predicate))
            edb_only = false;
      if (!edb_only)
        diags.push_back({"negation-restriction",
                         "rule for '" + r.head.predicate + "' negates IDB '" + target +
                             "', whose rules do not have only EDB predicates in their bodies",
                         l.atom.span});
    }
  }
  return diags;
}

AlternationStructure analyze_program(const Program& program, bool monadic) {
  auto diags = validate_program(program, monadic);
  auto neg = check_negation_restriction(program);
  diags.insert(diags.end(), neg.begin(), neg.end());
  auto s = analyze_alternation(program, build_dependency_graph(program));
  s.diagnostics.insert(s.diagnostics.begin(), diags.begin(), diags.end());
  return s;
}

}  // namespace infdl
