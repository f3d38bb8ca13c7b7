#include <gtest/gtest.h>

#include <algorithm>

#include "infdl/analysis.hpp"
#include "infdl/parser.hpp"
#include "support.hpp"

using namespace infdl;
using namespace infdl::test;

namespace {

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

}  // namespace

TEST(DependencyGraph, Example4) {
  auto g = build_dependency_graph(fixture_program("exstrat.idl"));
  EXPECT_EQ(g.nodes, (std::vector<std::string>{"phi", "psi"}));
  EXPECT_TRUE(g.has_edge("phi", "phi"));
  EXPECT_TRUE(g.has_edge("psi", "phi"));
  EXPECT_TRUE(g.has_edge("psi", "psi"));
  EXPECT_FALSE(g.has_edge("phi", "psi"));
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(DependencyGraph, Example6) {
  auto g = build_dependency_graph(fixture_program("exalt.idl"));
  EXPECT_TRUE(g.has_edge("phi2", "theta1"));
  EXPECT_TRUE(g.has_edge("phi2", "phi2"));
  EXPECT_TRUE(g.has_edge("theta1", "theta1"));
  EXPECT_TRUE(g.has_edge("theta1", "phi2"));
  EXPECT_EQ(g.edge_count(), 4u);
}

TEST(DependencyGraph, NonRecursiveRule) {
  auto g = build_dependency_graph(parse_program("phi(X) <- q(X).\n"));
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(DependencyGraph, NegativeEdgesCount) {
  auto g = build_dependency_graph(parse_program("phi(X) <- q(X).\npsi(X) <- r(X), ~phi(X).\n"));
  EXPECT_TRUE(g.has_edge("psi", "phi"));
}

TEST(Alternation, Example4IsStratified) {
  auto s = analyze_program(fixture_program("exstrat.idl"), true);
  EXPECT_TRUE(s.diagnostics.empty());
  EXPECT_TRUE(s.stratified);
  EXPECT_EQ(s.strata_count, 2u);
  ASSERT_EQ(s.sccs.size(), 2u);
  EXPECT_EQ(s.sccs[0].members, std::vector<std::string>{"phi"});
  EXPECT_EQ(s.sccs[1].members, std::vector<std::string>{"psi"});
  for (const auto& scc : s.sccs) {
    EXPECT_EQ(scc.k(), 1u);
    EXPECT_TRUE(scc.recursive);
  }
  EXPECT_EQ(s.alternation_depth, 1u);
}

TEST(Alternation, Example6HasTwoBlocks) {
  auto s = analyze_program(fixture_program("exalt.idl"), true);
  EXPECT_TRUE(s.diagnostics.empty());
  EXPECT_FALSE(s.stratified);
  ASSERT_EQ(s.sccs.size(), 1u);
  const auto& scc = s.sccs[0];
  ASSERT_EQ(scc.k(), 2u);
  EXPECT_EQ(scc.blocks[0].polarity, Fixpoint::least);
  EXPECT_EQ(scc.blocks[0].members, std::vector<std::string>{"theta1"});
  EXPECT_EQ(scc.blocks[1].polarity, Fixpoint::greatest);
  EXPECT_EQ(scc.blocks[1].members, std::vector<std::string>{"phi2"});
  EXPECT_EQ(s.alternation_depth, 2u);
}

TEST(Alternation, SelfRecursiveLfp) {
  auto s = analyze_program(parse_program("phi(X) <- q(X).\nphi(X) <- e(X, Y), phi(Y).\n"));
  ASSERT_EQ(s.sccs.size(), 1u);
  EXPECT_TRUE(s.sccs[0].recursive);
  EXPECT_EQ(s.sccs[0].k(), 1u);
}

TEST(Alternation, NonRecursiveSingleton) {
  auto s = analyze_program(parse_program("phi(X) <- q(X).\n"));
  ASSERT_EQ(s.sccs.size(), 1u);
  EXPECT_FALSE(s.sccs[0].recursive);
}

TEST(Alternation, AdjacentSamePolarityCoalesces) {
  auto s = analyze_program(parse_program(
      ".gfp c\n.order a, b, c\n"
      "a(X) <- q(X).\na(X) <- e(X, Y), b(Y).\n"
      "b(X) <- q(X).\nb(X) <- e(X, Y), c(Y).\n"
      "c(X) <- e(X, Y), a(Y), c(Y).\n"));
  ASSERT_TRUE(s.diagnostics.empty());
  ASSERT_EQ(s.sccs.size(), 1u);
  ASSERT_EQ(s.sccs[0].k(), 2u);
  EXPECT_EQ(s.sccs[0].blocks[0].members, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(s.sccs[0].blocks[1].members, std::vector<std::string>{"c"});
}

TEST(Alternation, MixedSccWithoutOrderIsDiagnosed) {
  auto s = analyze_program(parse_program(
      ".gfp phi2\n"
      "phi2(X) <- theta1(X), suc0(X,Y), phi2(Y).\n"
      "theta1(X) <- p(X), suc0(X,Y), phi2(Y).\n"));
  EXPECT_TRUE(has_code(s.diagnostics, "order-unspecified"));
}

TEST(Alternation, BlocksAlternateAndCoverMembers) {
  gen::Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::size_t I = 1 + t % 6;
    std::size_t k = 1 + rng() % I;
    auto g = gen::alternating_program(rng, I, k);
    auto s = analyze_program(g.program, true);
    ASSERT_TRUE(s.diagnostics.empty()) << print_program(g.program);
    ASSERT_EQ(s.sccs.size(), 1u);
    const Scc& scc = s.sccs[0];
    EXPECT_EQ(scc.k(), k);
    std::vector<std::string> concat;
    for (std::size_t j = 0; j < scc.blocks.size(); ++j) {
      EXPECT_EQ(scc.blocks[j].members.size(), g.block_sizes[j]);
      if (j) EXPECT_NE(scc.blocks[j].polarity, scc.blocks[j - 1].polarity);
      concat.insert(concat.end(), scc.blocks[j].members.begin(), scc.blocks[j].members.end());
    }
    EXPECT_EQ(concat, scc.members);
    EXPECT_EQ(s.stratified, k == 1);
  }
}

// Components are exactly the mutual-reachability classes, listed dependencies first.
TEST(Scc, MatchesReachabilityOnRandomGraphs) {
  gen::Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + t % 9;
    DependencyGraph g;
    for (std::size_t i = 0; i < n; ++i) g.nodes.push_back("v" + std::to_string(i));
    g.successors.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 4 == 0) g.successors[i].insert(j);
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      reach[i][i] = true;
      for (auto j : g.successors[i]) reach[i][j] = true;
    }
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][m] && reach[m][j]) reach[i][j] = true;

    auto comps = strongly_connected_components(g);
    std::vector<std::size_t> comp_of(n);
    std::size_t covered = 0;
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (const auto& name : comps[c]) {
        comp_of[*g.index_of(name)] = c;
        ++covered;
      }
    ASSERT_EQ(covered, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(comp_of[i] == comp_of[j], reach[i][j] && reach[j][i]);
        if (g.successors[i].count(j)) EXPECT_LE(comp_of[j], comp_of[i]);
      }
  }
}

TEST(Alternation, StratifiedProgramsAreTopologicallyOrdered) {
  gen::Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    auto g = gen::stratified_program(rng, 1 + t % 6);
    auto s = analyze_program(g.program, true);
    ASSERT_TRUE(s.diagnostics.empty()) << print_program(g.program);
    EXPECT_TRUE(s.stratified);
    std::size_t blocks = 0;
    for (const auto& scc : s.sccs) blocks += scc.blocks.size();
    EXPECT_EQ(blocks, s.sccs.size());
    EXPECT_EQ(s.strata_count, s.sccs.size());
    auto graph = build_dependency_graph(g.program);
    std::map<std::string, std::size_t> pos;
    for (std::size_t c = 0; c < s.sccs.size(); ++c)
      for (const auto& m : s.sccs[c].members) pos[m] = c;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
      for (auto j : graph.successors[i]) EXPECT_LE(pos[graph.nodes[j]], pos[graph.nodes[i]]);
  }
}

TEST(Alternation, Deterministic) {
  gen::Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    auto g = gen::alternating_program(rng, 4, 1 + t % 4);
    auto a = analyze_program(g.program);
    auto b = analyze_program(g.program);
    ASSERT_EQ(a.sccs.size(), b.sccs.size());
    for (std::size_t i = 0; i < a.sccs.size(); ++i) {
      EXPECT_EQ(a.sccs[i].members, b.sccs[i].members);
      ASSERT_EQ(a.sccs[i].blocks.size(), b.sccs[i].blocks.size());
      for (std::size_t j = 0; j < a.sccs[i].blocks.size(); ++j)
        EXPECT_EQ(a.sccs[i].blocks[j].members, b.sccs[i].blocks[j].members);
    }
  }
}

TEST(NegationRestriction, SpecExamples) {
  EXPECT_TRUE(check_negation_restriction(parse_program("psi(X) <- q(X), ~p(X).\n")).empty());
  EXPECT_TRUE(check_negation_restriction(
                  parse_program("phi(X) <- q(X).\npsi(X) <- q(X), ~phi(X).\n"))
                  .empty());
  EXPECT_EQ(check_negation_restriction(
                parse_program(".gfp phi\nphi(X) <- phi(X).\npsi(X) <- q(X), ~phi(X).\n"))
                .size(),
            1u);
}

TEST(NegationRestriction, TenCaseSuite) {
  ASSERT_EQ(negation_cases().size(), 10u);
  for (const auto& c : negation_cases()) {
    auto s = analyze_program(parse_program(c.program, c.name));
    EXPECT_EQ(s.diagnostics.empty(), c.accepted) << c.name;
    if (!c.accepted) EXPECT_TRUE(has_code(s.diagnostics, "negation-restriction")) << c.name;
  }
}

// Mutilated fixtures must be rejected by analysis.
TEST(Mutilation, DropTagFromExample6) {
  std::string text = read_file(fixture_path("exalt.idl"));
  auto s = analyze_program(parse_program(replace_once(text, ".gfp phi2\n", "")));
  EXPECT_TRUE(has_code(s.diagnostics, "no-initialization"));
}

TEST(Mutilation, UnbindHeadVariable) {
  for (const char* name : {"exalt.idl", "exstrat.idl"}) {
    std::string text = read_file(fixture_path(name));
    std::string broken = std::string(name) == "exalt.idl"
                             ? replace_once(text, "theta1(X) <- suc0(X,Y), theta1(Y).",
                                            "theta1(W) <- suc0(X,Y), theta1(Y).")
                             : replace_once(text, "psi(X) <- phi(X), r(X).", "psi(W) <- phi(X), r(X).");
    auto s = analyze_program(parse_program(broken));
    EXPECT_TRUE(has_code(s.diagnostics, "unsafe-rule")) << name;
  }
}

TEST(Mutilation, SwapExample4Order) {
  std::string text = ".order psi, phi\n" + read_file(fixture_path("exstrat.idl"));
  auto s = analyze_program(parse_program(text));
  EXPECT_TRUE(has_code(s.diagnostics, "order-not-topological"));
}

TEST(Mutilation, SwapInsideExample6SccIsAnotherValidProgram) {
  std::string text = read_file(fixture_path("exalt.idl"));
  auto s = analyze_program(parse_program(replace_once(text, ".order theta1, phi2", ".order phi2, theta1")));
  EXPECT_TRUE(s.diagnostics.empty());
  ASSERT_EQ(s.sccs.size(), 1u);
  EXPECT_EQ(s.sccs[0].blocks[0].polarity, Fixpoint::greatest);
}
