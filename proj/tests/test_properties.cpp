#include <gtest/gtest.h>

#include <algorithm>

#include "infdl/analysis.hpp"
#include "infdl/bench.hpp"
#include "infdl/engine.hpp"
#include "infdl/oracle.hpp"
#include "infdl/parser.hpp"
#include "support.hpp"

using namespace infdl;
using namespace infdl::test;

namespace {

ElementSet random_subset(gen::Rng& rng, std::size_t universe) {
  ElementSet s(universe);
  for (std::size_t i = 0; i < universe; ++i)
    if (rng() % 2) s.insert(i);
  return s;
}

ElementSet random_superset(gen::Rng& rng, ElementSet s) {
  for (std::size_t i = 0; i < s.universe(); ++i)
    if (rng() % 3 == 0) s.insert(i);
  return s;
}

// A random single-block lfp program.
gen::GeneratedProgram lfp_program(gen::Rng& rng, std::size_t I) {
  while (true) {
    auto g = gen::alternating_program(rng, I, 1);
    if (g.program.gfp.empty()) return g;
  }
}

}  // namespace

TEST(Properties, ApplyTIsMonotone) {
  gen::Rng rng(101);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = t % 5;
    auto g = t % 2 ? gen::stratified_program(rng, 1 + t % 4) : gen::alternating_program(rng, 3, 1 + t % 3);
    auto db = gen::random_database(rng, n);
    EvaluationContext ctx(g.program, db);
    Interpretation small = ctx.initial(), large = ctx.initial();
    for (const auto& idb : g.program.idbs()) {
      small.values[idb] = random_subset(rng, n);
      large.values[idb] = random_superset(rng, small.values[idb]);
    }
    auto a = apply_t(ctx, g.program.idbs(), small);
    auto b = apply_t(ctx, g.program.idbs(), large);
    EXPECT_TRUE(a.subset_of(b)) << print_program(g.program);
  }
}

TEST(Properties, KleeneChainsAreMonotoneAndShort) {
  gen::Rng rng(202);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = t % 8;
    std::size_t I = 1 + t % 6;
    auto g = gen::stratified_program(rng, I);
    auto db = gen::random_database(rng, n);
    auto s = analyze_program(g.program);
    EvaluationContext ctx(g.program, db);
    EvalOptions opts;
    opts.trace = true;
    auto res = eval_stratified(ctx, s, opts);
    EXPECT_LE(res.stats.productive_rounds, n * I);
    for (std::size_t c = 0; c < s.sccs.size(); ++c) {
      const Scc& scc = s.sccs[c];
      const bool lfp = scc.blocks[0].polarity == Fixpoint::least;
      std::optional<Interpretation> prev;
      std::size_t productive = 0;
      for (const auto& e : res.trace) {
        if (e.event != "round" || e.scc != c) continue;
        productive += e.changed;
        if (prev)
          for (const auto& m : scc.members) {
            const auto &before = prev->at(m), &after = e.snapshot.at(m);
            EXPECT_TRUE(lfp ? before.subset_of(after) : after.subset_of(before));
          }
        prev = e.snapshot;
      }
      EXPECT_LE(productive, n * scc.members.size());
    }
  }
}

TEST(Properties, GreatestFixpointContainsLeast) {
  gen::Rng rng(303);
  for (int t = 0; t < 200; ++t) {
    auto g = lfp_program(rng, 1 + t % 5);
    auto db = gen::random_database(rng, t % 6);
    Program flipped = g.program;
    for (const auto& i : flipped.idbs()) flipped.gfp.insert(i);
    auto least = eval_queries(g.program, db).answers;
    auto greatest = eval_queries(flipped, db).answers;
    EXPECT_TRUE(least.subset_of(greatest)) << print_program(g.program);
  }
}

TEST(Properties, EvaluationIsDeterministic) {
  gen::Rng rng(404);
  for (int t = 0; t < 50; ++t) {
    auto g = gen::alternating_program(rng, 1 + t % 5, 1 + t % std::min(3, 1 + t % 5));
    auto db = gen::random_database(rng, t % 5);
    EvalOptions opts;
    opts.trace = true;
    auto a = eval_queries(g.program, db, {}, opts);
    auto b = eval_queries(g.program, db, {}, opts);
    EXPECT_EQ(a.answers, b.answers);
    EXPECT_EQ(a.stats.t_applications, b.stats.t_applications);
    EXPECT_EQ(a.trace.size(), b.trace.size());
  }
  BenchConfig c;
  c.trials = 5;
  auto r1 = run_bench(c), r2 = run_bench(c);
  for (std::size_t i = 0; i < r1.trials.size(); ++i) EXPECT_EQ(r1.trials[i].measured, r2.trials[i].measured);
}

TEST(Properties, EngineMatchesOracle) {
  gen::Rng rng(505);
  std::size_t literal_disagreements = 0;
  for (int t = 0; t < 300; ++t) {
    std::size_t I = 1 + t % 5;
    std::size_t k = 1 + (t / 5) % std::min<std::size_t>(I, 3);
    std::size_t n = t % 6;
    auto g = gen::alternating_program(rng, I, k);
    auto db = gen::random_database(rng, n);
    auto s = analyze_program(g.program);
    EvaluationContext octx(g.program, db);
    auto expected = oracle::eval_nested(octx, s).answers;
    EXPECT_EQ(eval_queries(g.program, db).answers, expected) << print_program(g.program);
    EvalOptions lit;
    lit.mode = LoopMode::literal_bounds;
    auto literal = eval_queries(g.program, db, {}, lit).answers;
    bool singletons = std::all_of(g.block_sizes.begin(), g.block_sizes.end(),
                                  [](std::size_t m) { return m == 1; });
    if (singletons) EXPECT_EQ(literal, expected) << print_program(g.program);
    literal_disagreements += literal != expected;
  }
  RecordProperty("literal_disagreements", static_cast<int>(literal_disagreements));
}

TEST(Properties, LiteralModeMeetsTheBoundExactly) {
  gen::Rng rng(606);
  for (int t = 0; t < 200; ++t) {
    std::size_t I = 2 + t % 4;
    std::size_t k = 2 + t % std::min<std::size_t>(I - 1, 2);
    std::size_t n = t % 6;
    auto g = gen::alternating_program(rng, I, k);
    auto db = gen::random_database(rng, n);
    EvalOptions lit;
    lit.mode = LoopMode::literal_bounds;
    auto res = eval_queries(g.program, db, {}, lit);
    EXPECT_EQ(res.stats.literal_bound, algorithm1_bound(g.block_sizes, n));
    EXPECT_LE(res.stats.mixed_t_applications, res.stats.literal_bound);
    EXPECT_EQ(res.stats.mixed_t_applications, res.stats.literal_bound);
  }
}

TEST(Properties, OutermostBlockMovesOneWay) {
  gen::Rng rng(707);
  for (int t = 0; t < 200; ++t) {
    std::size_t I = 2 + t % 4;
    auto g = gen::alternating_program(rng, I, 2 + t % std::min<std::size_t>(I - 1, 2));
    auto db = gen::random_database(rng, 1 + t % 5);
    auto s = analyze_program(g.program);
    const Scc& scc = s.sccs.at(0);
    const Block& outer = scc.blocks.back();
    const std::size_t last = scc.blocks.size() - 1;
    EvalOptions opts;
    opts.trace = true;
    auto res = eval_queries(g.program, db, {}, opts);
    for (const auto& m : outer.members) {
      std::optional<ElementSet> prev;
      for (const auto& e : res.trace) {
        if (e.event != "update" || e.block != last || e.predicate != m) continue;
        const ElementSet& v = e.snapshot.at(m);
        if (prev)
          EXPECT_TRUE(outer.polarity == Fixpoint::greatest ? v.subset_of(*prev) : prev->subset_of(v));
        prev = v;
      }
    }
  }
}

TEST(Properties, BenchNeverExceedsBound) {
  for (std::size_t k = 1; k <= 3; ++k) {
    BenchConfig c;
    c.n = 3;
    c.k = k;
    c.I = 3;
    c.trials = 20;
    c.seed = 12 + k;
    auto r = run_bench(c);
    EXPECT_EQ(r.violations, 0u);
    for (const auto& tr : r.trials) {
      EXPECT_LE(tr.measured, tr.bound);
      EXPECT_TRUE(tr.oracle_checked);
    }
  }
}

TEST(Properties, BenchConfigValidation) {
  BenchConfig c;
  c.trials = 0;
  EXPECT_FALSE(c.validate().empty());
  EXPECT_THROW(run_bench(c), std::invalid_argument);
  c.trials = 1;
  c.k = 3;
  c.I = 2;
  EXPECT_FALSE(c.validate().empty());
  c.k = 0;
  EXPECT_FALSE(c.validate().empty());
  c.k = 2;
  EXPECT_TRUE(c.validate().empty());
}

TEST(Properties, BenchExampleFromTheCostSum) {
  BenchConfig c;
  c.n = 3;
  c.k = 2;
  c.I = 2;
  c.trials = 10;
  auto r = run_bench(c);
  for (const auto& tr : r.trials) {
    EXPECT_EQ(tr.bound, 16u);
    EXPECT_LE(tr.measured, 16u);
    EXPECT_TRUE(tr.oracle_agrees);
  }
}
