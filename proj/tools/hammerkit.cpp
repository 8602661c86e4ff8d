// hammerkit: premise selection and prover bridge over an exported corpus.
//
// Exit codes: 0 proof found / success, 1 no proof, 2 usage or configuration
// error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hammer/corpus.hpp"
#include "hammer/depreco.hpp"
#include "hammer/error.hpp"
#include "hammer/features.hpp"
#include "hammer/harness.hpp"
#include "hammer/syntax.hpp"
#include "hammer/tptp.hpp"

using namespace hammer;

namespace {

struct Options {
  std::string corpus;
  std::string relation = "loaded";
  std::size_t k = kDefaultK;
  std::string provers = "z3";
  double timeout = kDefaultTimeout;
  std::size_t jobs = 0;
  std::vector<std::string> budgets;
  std::string report;
  std::string goal;
  std::string prover_config;
  std::string tags = "all";
  bool tag_helper = false;
  std::string bool_args = "lifted";
  bool conjuncts = false;
  bool confirm = false;
  std::vector<std::string> files;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_report(const Options& o, const std::string& text) {
  if (o.report.empty()) return;
  std::ofstream out(o.report, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + o.report);
  out << text;
}

Corpus open_corpus(const Options& o) {
  if (o.corpus.empty()) throw Error(Errc::Usage, "--corpus is required");
  Corpus c = load_corpus(o.corpus);
  replay_corpus_traces(c, o.corpus);
  return c;
}

AccessRelation relation_of(const Options& o) {
  auto r = parse_relation(o.relation);
  if (!r) throw Error(Errc::Usage, "unknown relation '" + o.relation + "'");
  return *r;
}

HarnessOptions harness_options(const Options& o) {
  HarnessOptions h;
  std::map<std::string, ProverConfig> file;
  if (!o.prover_config.empty()) file = parse_prover_config(read_file(o.prover_config));
  std::map<std::string, std::size_t> budgets;
  for (const auto& b : o.budgets) {
    auto eq = b.find('=');
    if (eq == std::string::npos) throw Error(Errc::Usage, "--budget expects NAME=INT, got '" + b + "'");
    try {
      budgets[b.substr(0, eq)] = std::stoul(b.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw Error(Errc::Usage, "--budget expects NAME=INT, got '" + b + "'");
    }
  }
  std::istringstream list(o.provers);
  for (std::string name; std::getline(list, name, ',');) {
    if (name.empty()) continue;
    ProverConfig c = resolve_prover(name, file);
    c.timeout = o.timeout;
    if (auto it = budgets.find(name); it != budgets.end()) c.budget = it->second;
    if (c.budget == 0) throw Error(Errc::Usage, "budget for " + name + " must be positive");
    h.provers.push_back(c);
  }
  for (const auto& [name, _] : budgets) {
    bool used = false;
    for (const auto& p : h.provers) used = used || p.name == name;
    if (!used) throw Error(Errc::Usage, "--budget names prover '" + name + "' not in --provers");
  }
  if (o.timeout <= 0) throw Error(Errc::Usage, "--timeout must be positive");
  if (o.k == 0) throw Error(Errc::Usage, "--k must be positive");
  h.k = o.k;
  h.jobs = o.jobs;
  if (o.tags != "all" && o.tags != "minimal") throw Error(Errc::Usage, "--tags must be all or minimal");
  h.translate.tags = o.tags == "all" ? TagMode::All : TagMode::Minimal;
  h.translate.tag_helper = o.tag_helper;
  if (o.bool_args != "lifted" && o.bool_args != "existential")
    throw Error(Errc::Usage, "--bool-args must be lifted or existential");
  h.translate.bool_args = o.bool_args == "lifted" ? BoolArgMode::Lifted : BoolArgMode::Existential;
  h.confirm_cores = o.confirm;
  return h;
}

// Goal text: a file's contents when the argument names a file.
std::string goal_text(const std::string& goal) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(goal, ec)) return read_file(goal);
  return goal;
}

int cmd_parse(const Options& o) {
  std::string out;
  auto emit = [&](const std::vector<ObjectEntry>& entries) {
    for (const auto& e : entries) out += print_tt(e) + "\n";
  };
  if (!o.files.empty()) {
    Signature sig;
    for (const auto& f : o.files) emit(parse_tt(read_file(f), sig, std::filesystem::path(f).stem().string()));
  } else {
    Corpus c = open_corpus(o);
    for (const auto& th : c.theories()) out += c.tt_text(th);
  }
  std::cout << out;
  write_report(o, out);
  return 0;
}

int cmd_deps(const Options& o) {
  Corpus c = open_corpus(o);
  std::string out;
  if (!o.goal.empty()) {
    auto pos = c.find(o.goal);
    if (!pos) throw Error(Errc::UnknownTheorem, o.goal);
    for (std::size_t i : accessible_set(c, *pos, relation_of(o))) out += c.theorem(i).name + "\n";
  } else {
    for (const auto& th : c.theories()) out += c.deps_text(th);
  }
  std::cout << out;
  write_report(o, out);
  return 0;
}

int cmd_features(const Options& o) {
  std::string out;
  if (!o.goal.empty() && o.corpus.empty()) {
    Signature sig;
    for (const auto& f : extract(parse_term(goal_text(o.goal), sig))) out += f + "\n";
  } else {
    Corpus c = open_corpus(o);
    std::vector<Term> stmts;
    std::vector<std::string> names;
    for (const auto& th : c.theorems()) {
      stmts.push_back(th.statement);
      names.push_back(th.name);
    }
    out = print_fea(names, extract_all(stmts));
  }
  std::cout << out;
  write_report(o, out);
  return 0;
}

// Goal statement plus its accessible set under the relation.
struct GoalContext {
  Term statement;
  std::vector<std::size_t> accessible;
};

GoalContext goal_context(const Corpus& c, const Options& o) {
  if (o.goal.empty()) throw Error(Errc::Usage, "--goal is required");
  AccessRelation rel = relation_of(o);
  if (auto pos = c.find(o.goal)) return {c.theorem(*pos).statement, accessible_set(c, *pos, rel)};
  if (rel == AccessRelation::ExactDeps || rel == AccessRelation::TransitiveDeps)
    throw Error(Errc::Usage, std::string("relation ") + relation_name(rel) + " needs a corpus theorem as --goal");
  GoalContext g;
  auto conj = std::find_if(c.conjectures().begin(), c.conjectures().end(),
                           [&](const ObjectEntry& e) { return e.name == o.goal; });
  g.statement = conj != c.conjectures().end() ? conj->statement() : parse_term(goal_text(o.goal), c.sig);
  for (std::size_t i = 0; i < c.size(); ++i) g.accessible.push_back(i);
  return g;
}

int cmd_predict(const Options& o) {
  Corpus c = open_corpus(o);
  HarnessOptions h = harness_options(o);
  std::size_t limit = 0;
  for (const auto& p : h.provers) limit = std::max(limit, p.budget);
  GoalContext g = goal_context(c, o);
  Predictor pred(c);
  auto p = pred.predict(extract(g.statement), g.accessible, h.k, limit);
  std::string out;
  for (const auto& r : p.ranked) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f ", r.relevance);
    out += buf + c.theorem(r.id).name + "\n";
  }
  std::cout << out;
  write_report(o, out);
  return 0;
}

int cmd_translate(const Options& o) {
  Corpus c = open_corpus(o);
  HarnessOptions h = harness_options(o);
  GoalContext g = goal_context(c, o);
  std::vector<NamedTerm> prem;
  if (relation_of(o) == AccessRelation::ExactDeps) {
    for (std::size_t i : g.accessible) prem.push_back({c.theorem(i).name, c.theorem(i).statement});
  } else {
    Predictor pred(c);
    auto p = pred.predict(extract(g.statement), g.accessible, h.k, h.provers.front().budget);
    for (const auto& r : p.ranked) prem.push_back({c.theorem(r.id).name, c.theorem(r.id).statement});
  }
  auto tp = translate_problem(c.sig, prem, g.statement, h.translate);
  // A .smt2 report path selects SMT-LIB output.
  std::string out = o.report.ends_with(".smt2") ? print_smt2(tp.problem) : print_problem(tp.problem);
  std::cout << out;
  write_report(o, out);
  return 0;
}

int cmd_reprove(const Options& o) {
  Corpus c = open_corpus(o);
  auto rep = reprove(c, o.conjuncts ? SplitMode::Conjuncts : SplitMode::Unsplit, harness_options(o));
  std::cout << rep.table();
  write_report(o, rep.csv());
  return rep.union_count() > 0 || rep.evaluated() == 0 ? 0 : 1;
}

int cmd_experiment(const Options& o) {
  Corpus c = open_corpus(o);
  auto rep = experiment(c, relation_of(o), harness_options(o));
  std::cout << rep.table();
  write_report(o, rep.csv());
  return rep.union_count() > 0 || rep.evaluated() == 0 ? 0 : 1;
}

int cmd_advise(const Options& o) {
  if (o.goal.empty()) throw Error(Errc::Usage, "--goal is required");
  auto t0 = std::chrono::steady_clock::now();
  Corpus c = open_corpus(o);
  double load = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Advice a = advise(c, o.goal, relation_of(o), harness_options(o));
  a.times.parse += load;  // corpus loading counts as parsing
  std::string out = format_advice(a);
  std::cout << out;
  write_report(o, out);
  return a.proved ? 0 : 1;
}

int cmd_minimize(const Options& o) {
  if (o.goal.empty()) throw Error(Errc::Usage, "--goal is required");
  HarnessOptions h = harness_options(o);
  const ProverConfig& cfg = h.provers.front();
  FofProblem problem;
  std::optional<TranslatedProblem> tp;
  std::error_code ec;
  if (o.corpus.empty() && std::filesystem::is_regular_file(o.goal, ec)) {
    problem = parse_problem(read_file(o.goal));
  } else {
    Corpus c = open_corpus(o);
    auto pos = c.find(o.goal);
    if (!pos) throw Error(Errc::UnknownTheorem, o.goal);
    std::vector<NamedTerm> prem;
    for (std::size_t i : c.theorem(*pos).theorem_deps()) prem.push_back({c.theorem(i).name, c.theorem(i).statement});
    tp = translate_problem(c.sig, prem, c.theorem(*pos).statement, h.translate);
    problem = tp->problem;
  }
  AtpResult r = run_prover(problem, cfg, o.goal);
  std::string out = std::string(szs_name(r.status)) + "\n";
  if (!r.core) {
    std::cout << out;
    write_report(o, out);
    return 1;
  }
  MinimizeResult m = minimize_core(problem, *r.core, cfg);
  auto names = tp ? tp->user_core(m.axioms) : m.axioms;
  out += "core (" + std::to_string(r.core->axioms.size()) + " -> " + std::to_string(m.axioms.size()) + " axioms, " +
         std::to_string(m.runs) + " runs" + (m.confirmed ? "" : ", unconfirmed") + "):";
  for (const auto& n : names) out += " " + n;
  out += "\n";
  std::cout << out;
  write_report(o, out);
  return m.confirmed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Premise selection and first-order prover bridge for exported theorem corpora"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Corpus directory");
    sub->add_option("--relation", o.relation, "Accessible facts: exact, transitive, loaded or linear")
        ->check(CLI::IsMember({"exact", "transitive", "loaded", "linear"}));
    sub->add_option("--k", o.k, "Neighbours for k-NN");
    sub->add_option("--provers", o.provers, "Comma-separated provers (vampire, eprover, z3)");
    sub->add_option("--timeout", o.timeout, "Seconds per prover run");
    sub->add_option("--jobs", o.jobs, "Worker threads (default: all cores)");
    sub->add_option("--budget", o.budgets, "Premise budget override NAME=INT")->take_all();
    sub->add_option("--report", o.report, "Write the report (CSV for experiments) to PATH");
    sub->add_option("--goal", o.goal, "Goal: theorem or conjecture name, file, or formula");
    sub->add_option("--prover-config", o.prover_config, "Prover config file (NAME.KEY = VALUE)");
    sub->add_option("--tags", o.tags, "Type tags: all or minimal")->check(CLI::IsMember({"all", "minimal"}));
    sub->add_flag("--tag-helper", o.tag_helper, "Add the tag-erasing helper axiom");
    sub->add_option("--bool-args", o.bool_args, "Boolean arguments: lifted or existential")
        ->check(CLI::IsMember({"lifted", "existential"}));
  };

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> cmds;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    cmds.emplace_back(sub, fn);
    return sub;
  };
  add("parse", "Parse .tt files (or a corpus) and print them canonically", cmd_parse)
      ->add_option("files", o.files, ".tt files");
  add("deps", "Print recovered dependencies, or the accessible set of --goal", cmd_deps);
  add("features", "Print theorem features", cmd_features);
  add("predict", "Rank premises for --goal", cmd_predict);
  add("translate", "Print the first-order problem for --goal", cmd_translate);
  add("reprove", "Reprove every theorem from its exact dependencies", cmd_reprove)
      ->add_flag("--conjuncts", o.conjuncts, "One problem per conjunct");
  add("experiment", "Evaluate predictions under --relation", cmd_experiment);
  add("advise", "Find premises for --goal and prove it", cmd_advise);
  add("minimize", "Pseudo-minimize the core of --goal (TPTP file or corpus theorem)", cmd_minimize);
  for (auto& [sub, fn] : cmds)
    if (std::string(sub->get_name()) == "reprove" || std::string(sub->get_name()) == "experiment")
      sub->add_flag("--confirm-cores", o.confirm, "Re-run each proof on its core");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    for (auto& [sub, fn] : cmds)
      if (sub->parsed()) return fn(o);
  } catch (const Error& e) {
    std::cerr << "hammerkit: " << e.what() << "\n";
    return e.code() == Errc::NoProofFound ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "hammerkit: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
