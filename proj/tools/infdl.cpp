// infdl: check, evaluate and model-check monadic inf-Datalog programs.
//
// Exit status: 0 success, 1 input error (file, parse, analysis, compile),
// 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

#include "infdl/analysis.hpp"
#include "infdl/bench.hpp"
#include "infdl/engine.hpp"
#include "infdl/oracle.hpp"
#include "infdl/parser.hpp"
#include "infdl/temporal.hpp"

using json = nlohmann::ordered_json;
using namespace infdl;

namespace {

constexpr int kInputError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw FileError(e.what());
  }
}

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
};

std::size_t arity_of(const Program& p, const std::string& name) { return p.arity(name).value_or(1); }

json value_json(const ElementSet& s, std::size_t arity, const Database& db) {
  if (arity == 0) return s.contains(0);
  json arr = json::array();
  for (const auto& c : to_constants(s, arity, db)) arr.push_back(c);
  return arr;
}

json interpretation_json(const Interpretation& in, const Program& p, const Database& db) {
  json out = json::object();
  for (const auto& [name, v] : in.values) out[name] = value_json(v, arity_of(p, name), db);
  return out;
}

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json arr = json::array();
  for (const auto& d : ds)
    arr.push_back({{"code", d.code},
                   {"message", d.message},
                   {"file", d.span.file},
                   {"line", d.span.line},
                   {"column", d.span.column}});
  return arr;
}

void print_diagnostics(const std::vector<Diagnostic>& ds, const Globals& g) {
  if (g.json) {
    std::cout << json{{"diagnostics", diagnostics_json(ds)}}.dump(2) << "\n";
  } else {
    for (const auto& d : ds) std::cerr << d.str() << "\n";
  }
}

std::string polarity_name(Fixpoint f) { return f == Fixpoint::greatest ? "gfp" : "lfp"; }

json structure_json(const AlternationStructure& s) {
  json sccs = json::array();
  for (const auto& scc : s.sccs) {
    json blocks = json::array();
    for (const auto& b : scc.blocks)
      blocks.push_back({{"polarity", polarity_name(b.polarity)}, {"members", b.members}});
    sccs.push_back({{"members", scc.members},
                    {"recursive", scc.recursive},
                    {"k", scc.k()},
                    {"blocks", blocks}});
  }
  std::size_t k = 0;
  for (const auto& scc : s.sccs) k = std::max(k, scc.k());
  return {{"stratified", s.stratified}, {"strataCount", s.strata_count}, {"k", k},
          {"sccs", sccs}, {"diagnostics", diagnostics_json(s.diagnostics)}};
}

Program load_program(const std::string& path) { return parse_program(read_input(path), path); }

Database load_database(const std::string& path) {
  const std::string text = read_input(path);
  const bool kripke = path.size() >= 7 && path.compare(path.size() - 7, 7, ".kripke") == 0;
  return kripke ? parse_kripke(text, path) : parse_database(text, path);
}

json stats_json(const EvalStats& s) {
  json blocks = json::array();
  for (const auto& b : s.per_block)
    blocks.push_back({{"scc", b.scc},
                      {"block", b.block},
                      {"polarity", polarity_name(b.polarity)},
                      {"members", b.members},
                      {"tApplications", b.t_applications},
                      {"iterations", b.iterations}});
  return {{"tApplications", s.t_applications},
          {"productiveRounds", s.productive_rounds},
          {"literalBound", s.literal_bound},
          {"mixedTApplications", s.mixed_t_applications},
          {"withinLiteralBound", s.within_literal_bound},
          {"perBlock", blocks}};
}

json trace_json(const std::vector<TraceEntry>& trace, const Program& p, const Database& db) {
  json arr = json::array();
  for (const auto& e : trace) {
    json j = {{"event", e.event}, {"scc", e.scc}, {"block", e.block}, {"iteration", e.iteration}};
    if (!e.predicate.empty()) j["predicate"] = e.predicate;
    j["changed"] = e.changed;
    j["snapshot"] = interpretation_json(e.snapshot, p, db);
    arr.push_back(std::move(j));
  }
  return arr;
}

void print_answers_text(const Interpretation& in, const Program& p, const Database& db) {
  for (const auto& [name, v] : in.values)
    std::cout << name << " = " << format_set(v, arity_of(p, name), db) << "\n";
}

// ---------------------------------------------------------------------------

int command_check(const std::string& prog_path, const Globals& g) {
  Program p = load_program(prog_path);
  auto s = analyze_program(p, p.monadic);
  if (g.json) {
    std::cout << structure_json(s).dump(2) << "\n";
  } else {
    std::cout << "stratified: " << (s.stratified ? "yes" : "no") << "\n";
    std::cout << "strata: " << s.strata_count << "\n";
    std::cout << "k: " << s.alternation_depth << "\n";
    for (std::size_t i = 0; i < s.sccs.size(); ++i) {
      const auto& scc = s.sccs[i];
      std::cout << "scc " << i << (scc.recursive ? " (recursive)" : "") << ":";
      for (const auto& b : scc.blocks) {
        std::cout << " " << polarity_name(b.polarity) << "{";
        for (std::size_t j = 0; j < b.members.size(); ++j)
          std::cout << (j ? "," : "") << b.members[j];
        std::cout << "}";
      }
      std::cout << "\n";
    }
    for (const auto& d : s.diagnostics) std::cerr << d.str() << "\n";
  }
  return s.diagnostics.empty() ? 0 : kInputError;
}

struct EvalArgs {
  std::string program, database;
  std::vector<std::string> queries;
  bool trace = false, stats = false, literal = false, early = false;
};

int command_eval(const EvalArgs& a, const Globals& g) {
  Program p = load_program(a.program);
  Database db = load_database(a.database);
  for (const auto& q : a.queries)
    if (!p.is_idb(q)) throw UsageError("query '" + q + "' is not an IDB of the program");
  EvalOptions opts;
  opts.trace = a.trace;
  opts.mode = a.literal ? LoopMode::literal_bounds : LoopMode::early_exit;
  auto res = eval_queries(p, db, {a.queries.begin(), a.queries.end()}, opts);
  if (g.json) {
    json out = {{"answers", interpretation_json(res.answers, p, db)}};
    if (a.stats) out["stats"] = stats_json(res.stats);
    if (a.trace) out["trace"] = trace_json(res.trace, p, db);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  print_answers_text(res.answers, p, db);
  if (a.stats) {
    std::cout << "tApplications: " << res.stats.t_applications << "\n";
    std::cout << "productiveRounds: " << res.stats.productive_rounds << "\n";
    if (res.stats.literal_bound)
      std::cout << "literalBound: " << res.stats.literal_bound
                << " (mixed-SCC applications: " << res.stats.mixed_t_applications << ")\n";
  }
  if (a.trace) {
    for (const auto& e : res.trace) {
      std::cout << e.event << " scc=" << e.scc << " block=" << e.block << " it=" << e.iteration;
      if (!e.predicate.empty()) std::cout << " " << e.predicate;
      if (e.event == "round" || e.event == "update") std::cout << (e.changed ? " changed" : " stable");
      std::cout << " :";
      for (const auto& [name, v] : e.snapshot.values)
        std::cout << " " << name << "=" << format_set(v, arity_of(p, name), db);
      std::cout << "\n";
    }
  }
  return 0;
}

int command_oracle(const std::string& prog_path, const std::string& db_path, const Globals& g) {
  Program p = load_program(prog_path);
  Database db = load_database(db_path);
  auto s = analyze_program(p, p.monadic);
  if (!s.diagnostics.empty()) throw AnalysisError(s.diagnostics);
  EvaluationContext ctx(p, db, params_from_database(p, db));
  auto res = oracle::eval_nested(ctx, s);
  auto engine = eval_queries(p, db);
  const bool agrees = engine.answers == res.answers;
  if (g.json) {
    std::cout << json{{"answers", interpretation_json(res.answers, p, db)},
                      {"tApplications", res.stats.t_applications},
                      {"agreesWithEngine", agrees}}
                     .dump(2)
              << "\n";
  } else {
    print_answers_text(res.answers, p, db);
    std::cout << "engine agrees: " << (agrees ? "yes" : "no") << "\n";
  }
  return 0;
}

struct McArgs {
  std::string formula, kripke, state;
  std::vector<std::string> sig;
  bool functional = false, emit = false;
};

int command_mc(const McArgs& a, const Globals& g) {
  FormulaPtr f = parse_formula(a.formula, "<formula>");
  Database k = load_database(a.kripke);
  ModalSignature sig;
  if (a.sig.empty()) {
    sig = signature_of(k, a.functional);
  } else {
    sig.relations = a.sig;
    if (a.functional) sig.functional.insert(a.sig.begin(), a.sig.end());
  }
  std::optional<Constant> state;
  if (!a.state.empty()) state = a.state;
  auto res = model_check(f, k, sig, state);
  if (g.json) {
    json out = {{"formula", to_string(*f)},
                {"desugared", to_string(*desugar_ctl(f))},
                {"root", res.compiled.root},
                {"states", res.states}};
    if (res.holds) out["holds"] = *res.holds;
    if (a.emit) out["datalog"] = print_program(res.compiled.program);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (a.emit) std::cout << print_program(res.compiled.program) << "\n";
  std::cout << "states = {";
  bool first = true;
  for (const auto& s : res.states) {
    std::cout << (first ? "" : ",") << s;
    first = false;
  }
  std::cout << "}\n";
  if (res.holds) std::cout << a.state << ": " << (*res.holds ? "holds" : "does not hold") << "\n";
  return 0;
}

int command_bench(BenchConfig cfg, const Globals& g) {
  cfg.seed = g.seed;
  if (auto err = cfg.validate(); !err.empty()) throw UsageError(err);
  auto r = run_bench(cfg);
  if (g.json) {
    json trials = json::array();
    for (const auto& t : r.trials) {
      json j = {{"trial", t.trial}, {"blockSizes", t.block_sizes}, {"measured", t.measured},
                {"bound", t.bound}, {"ratio", t.ratio}};
      if (t.oracle_checked) j["oracleAgrees"] = t.oracle_agrees;
      trials.push_back(std::move(j));
    }
    std::cout << json{{"n", cfg.n}, {"k", cfg.k}, {"I", cfg.I}, {"seed", cfg.seed},
                      {"trials", trials}, {"violations", r.violations},
                      {"oracleMismatches", r.oracle_mismatches}}
                     .dump(2)
              << "\n";
  } else {
    const char* unit = cfg.k == 1 ? "productive rounds" : "T applications";
    for (const auto& t : r.trials) {
      std::cout << "trial " << t.trial << ": " << t.measured << " / " << t.bound << " " << unit
                << " (ratio " << t.ratio << ")";
      if (t.oracle_checked) std::cout << (t.oracle_agrees ? " oracle ok" : " ORACLE MISMATCH");
      std::cout << "\n";
    }
    std::cout << "violations: " << r.violations << ", oracle mismatches: " << r.oracle_mismatches
              << "\n";
  }
  return r.violations == 0 && r.oracle_mismatches == 0 ? 0 : kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monadic inf-Datalog engine and mu-calculus model checker", "infdl"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "random seed (bench)");

  std::string prog_path, db_path;
  auto* check = app.add_subcommand("check", "analyze a program");
  check->add_option("program", prog_path)->required();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate a program on a database");
  eval->add_option("program", ea.program)->required();
  eval->add_option("database", ea.database)->required();
  eval->add_option("--query", ea.queries, "restrict answers to these IDBs");
  eval->add_flag("--trace", ea.trace, "record iterates");
  eval->add_flag("--stats", ea.stats, "report operator counts");
  auto* lit = eval->add_flag("--literal-bounds", ea.literal, "run Algorithm1 loops to their bounds");
  auto* early = eval->add_flag("--early-exit", ea.early, "stop loops when values repeat (default)");
  lit->excludes(early);

  auto* orc = app.add_subcommand("oracle", "evaluate with the reference implementation");
  orc->add_option("program", prog_path)->required();
  orc->add_option("database", db_path)->required();

  McArgs ma;
  auto* mc = app.add_subcommand("mc", "model-check a formula on a Kripke structure");
  mc->add_option("--formula", ma.formula)->required();
  mc->add_option("kripke", ma.kripke)->required();
  mc->add_option("--sig", ma.sig, "successor relations")->delimiter(',');
  mc->add_flag("--functional", ma.functional, "declare the relations total functions");
  mc->add_option("--state", ma.state, "report whether this state satisfies the formula");
  mc->add_flag("--emit-datalog", ma.emit, "print the compiled program");

  BenchConfig bc;
  auto* bench = app.add_subcommand("bench", "check iteration bounds on random programs");
  bench->add_option("--n", bc.n, "domain size");
  bench->add_option("--k", bc.k, "alternation blocks");
  bench->add_option("--I", bc.I, "IDB count");
  bench->add_option("--trials", bc.trials, "number of programs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*check) return command_check(prog_path, g);
    if (*eval) return command_eval(ea, g);
    if (*orc) return command_oracle(prog_path, db_path, g);
    if (*mc) return command_mc(ma, g);
    if (*bench) return command_bench(bc, g);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const FileError& e) {
    std::cerr << "file error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const AnalysisError& e) {
    print_diagnostics(e.diagnostics(), g);
    return kInputError;
  } catch (const CompileError& e) {
    std::cerr << "compile error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kUsageError;
}
