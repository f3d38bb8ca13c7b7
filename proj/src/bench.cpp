#include "infdl/bench.hpp"

#include <stdexcept>

#include "infdl/analysis.hpp"
#include "infdl/engine.hpp"
#include "infdl/generate.hpp"
#include "infdl/oracle.hpp"

namespace infdl {

std::string BenchConfig::validate() const {
  if (k < 1) return "k must be at least 1";
  if (k > I) return "k must not exceed I";
  if (trials < 1) return "trials must be at least 1";
  return {};
}

BenchReport run_bench(const BenchConfig& config) {
  if (auto err = config.validate(); !err.empty()) throw std::invalid_argument(err);
  BenchReport report;
  report.config = config;
  for (std::size_t t = 0; t < config.trials; ++t) {
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(t)};
    gen::Rng rng(seq);
    auto g = config.k == 1 ? gen::stratified_program(rng, config.I)
                           : gen::alternating_program(rng, config.I, config.k);
    Database db = gen::random_database(rng, config.n);
    auto structure = analyze_program(g.program, true);
    if (!structure.diagnostics.empty()) throw AnalysisError(structure.diagnostics);

    EvaluationContext ctx(g.program, db);
    EvalOptions opts;
    opts.mode = LoopMode::literal_bounds;
    TrialReport tr;
    tr.trial = t;
    tr.block_sizes = g.block_sizes;
    EvaluationResult res;
    if (config.k == 1) {
      res = eval_stratified(ctx, structure, opts);
      tr.measured = res.stats.productive_rounds;
      tr.bound = config.n * config.I;
    } else {
      res = eval_algorithm1(ctx, structure, opts);
      tr.measured = res.stats.mixed_t_applications;
      tr.bound = algorithm1_bound(g.block_sizes, config.n);
    }
    tr.ratio = tr.bound ? static_cast<double>(tr.measured) / static_cast<double>(tr.bound) : 0.0;
    if (tr.measured > tr.bound) ++report.violations;
    if (config.n <= 5) {
      EvaluationContext octx(g.program, db);
      tr.oracle_checked = true;
      tr.oracle_agrees = oracle::eval_nested(octx, structure).answers == res.answers;
      if (!tr.oracle_agrees) ++report.oracle_mismatches;
    }
    report.trials.push_back(std::move(tr));
  }
  return report;
}

}  // namespace infdl
