#include "hammer/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hammer/error.hpp"
#include "hammer/features.hpp"
#include "hammer/syntax.hpp"

namespace hammer {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int worker_count(std::size_t jobs) { return jobs ? static_cast<int>(jobs) : omp_get_max_threads(); }

void check_provers(const HarnessOptions& options) {
  if (options.provers.empty()) throw Error(Errc::Usage, "no provers configured");
  for (const auto& p : options.provers) {
    if (find_executable(p.executable).empty())
      throw Error(Errc::SpawnError, "prover '" + p.name + "' not found at '" + p.executable + "'");
    if (p.budget == 0) throw Error(Errc::Usage, "prover '" + p.name + "' budget must be positive");
  }
  if (options.k == 0) throw Error(Errc::Usage, "k must be positive");
}

std::string fmt_pct(std::size_t n, std::size_t total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Left-aligned first column, right-aligned numbers.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  std::string out;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto& r = rows[ri];
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::string pad(width[i] - r[i].size(), ' ');
      line += i == 0 ? r[i] + pad : "  " + pad + r[i];
    }
    out += line + "\n";
    if (ri == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

}  // namespace

// --- cores -------------------------------------------------------------------

MinimizeResult minimize_core(const FofProblem& problem, const CoreResult& core, const ProverConfig& config) {
  MinimizeResult out;
  out.axioms = core.axioms;
  std::vector<std::string> current = core.axioms;
  for (;;) {
    std::set<std::string> keep(current.begin(), current.end());
    FofProblem sub;
    for (const auto& f : problem.formulas)
      if (f.role == "conjecture" || keep.count(f.name)) sub.formulas.push_back(f);
    AtpResult r;
    try {
      r = run_prover(sub, config);
    } catch (const Error&) {
      r.status = SzsStatus::Error;
    }
    ++out.runs;
    if (!proves(r.status) || !r.core) {
      out.fallback = true;
      return out;
    }
    out.axioms = current;
    out.confirmed = true;
    if (r.core->axioms.size() >= current.size()) return out;  // fixpoint: a core is a subset
    current = r.core->axioms;
  }
}

// --- reports -----------------------------------------------------------------

std::size_t ExperimentReport::solved_count(std::size_t prover) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < problems.size(); ++p) n += solved(p, prover);
  return n;
}

std::size_t ExperimentReport::union_count() const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    bool any = false;
    for (std::size_t q = 0; q < provers.size(); ++q) any = any || solved(p, q);
    n += any;
  }
  return n;
}

std::size_t ExperimentReport::unique_count(std::size_t prover) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    if (!solved(p, prover)) continue;
    bool other = false;
    for (std::size_t q = 0; q < provers.size(); ++q) other = other || (q != prover && solved(p, q));
    n += !other;
  }
  return n;
}

std::size_t ExperimentReport::countersat_count(std::size_t prover) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < problems.size(); ++p) n += result(p, prover).atp.status == SzsStatus::CounterSatisfiable;
  return n;
}

std::pair<std::size_t, std::size_t> ExperimentReport::confirmed_cores() const {
  std::size_t ok = 0, total = 0;
  for (const auto& r : results) {
    if (!proves(r.atp.status) || !r.confirm) continue;
    ++total;
    ok += r.confirm->confirmed;
  }
  return {ok, total};
}

std::string ExperimentReport::csv() const {
  std::string out = "problem,theory,prover,status,seconds,premises,core_size,core_confirmed,core\n";
  for (std::size_t p = 0; p < problems.size(); ++p) {
    for (std::size_t q = 0; q < provers.size(); ++q) {
      const auto& r = result(p, q);
      std::string core;
      for (const auto& c : r.core) core += (core.empty() ? "" : ";") + c;
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.3f", r.atp.seconds);
      std::string confirmed = !r.confirm ? "" : r.confirm->confirmed ? "yes" : "no";
      out += csv_field(problems[p].label) + "," + csv_field(problems[p].theory) + "," + provers[q] + "," +
             szs_name(r.atp.status) + "," + secs + "," + std::to_string(r.premises) + "," +
             (proves(r.atp.status) ? std::to_string(r.core.size()) : "") + "," + confirmed + "," + csv_field(core) +
             "\n";
    }
  }
  return out;
}

std::string ExperimentReport::table() const {
  std::size_t n = evaluated();
  std::vector<std::vector<std::string>> rows{{"prover", "theorem", "%", "unique", "countersat"}};
  for (std::size_t q = 0; q < provers.size(); ++q)
    rows.push_back({provers[q], std::to_string(solved_count(q)), fmt_pct(solved_count(q), n),
                    std::to_string(unique_count(q)), std::to_string(countersat_count(q))});
  rows.push_back({"union", std::to_string(union_count()), fmt_pct(union_count(), n), "", ""});
  std::string out = mode + ": " + std::to_string(n) + " problems\n\n" + render_table(rows);

  auto [ok, total] = confirmed_cores();
  if (total) out += "\ncore re-runs proving: " + std::to_string(ok) + "/" + std::to_string(total) + "\n";

  std::vector<std::string> theories;
  for (const auto& p : problems)
    if (std::find(theories.begin(), theories.end(), p.theory) == theories.end()) theories.push_back(p.theory);
  std::vector<std::vector<std::string>> trows{{"theory", "problems"}};
  for (const auto& pr : provers) trows[0].push_back(pr + " %");
  trows[0].push_back("union %");
  for (const auto& th : theories) {
    std::size_t count = 0, any = 0;
    std::vector<std::size_t> per(provers.size(), 0);
    for (std::size_t p = 0; p < problems.size(); ++p) {
      if (problems[p].theory != th) continue;
      ++count;
      bool a = false;
      for (std::size_t q = 0; q < provers.size(); ++q) {
        per[q] += solved(p, q);
        a = a || solved(p, q);
      }
      any += a;
    }
    std::vector<std::string> row{th, std::to_string(count)};
    for (auto s : per) row.push_back(fmt_pct(s, count));
    row.push_back(fmt_pct(any, count));
    trows.push_back(row);
  }
  return out + "\n" + render_table(trows);
}

// --- problems ----------------------------------------------------------------

std::vector<HolProblem> reprove_problems(const Corpus& corpus, SplitMode split) {
  std::vector<HolProblem> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& th = corpus.theorem(i);
    if (th.definition) continue;
    if (split == SplitMode::Unsplit) {
      HolProblem p{th.name, th.id.theory, {}, th.statement};
      for (std::size_t d : th.theorem_deps()) p.premises.push_back({corpus.theorem(d).name, corpus.theorem(d).statement});
      out.push_back(std::move(p));
      continue;
    }
    for (std::size_t c = 0; c < th.conjuncts.size(); ++c) {
      HolProblem p{corpus.conjunct_name({i, c + 1}), th.id.theory, {}, th.conjuncts[c].term};
      for (const auto& ref : th.deps[c])
        p.premises.push_back(
            {corpus.conjunct_name(ref), corpus.theorem(ref.theorem).conjuncts.at(ref.conjunct - 1).term});
      out.push_back(std::move(p));
    }
  }
  return out;
}

Predictor::Predictor(const Corpus& corpus) {
  std::vector<Term> stmts;
  for (const auto& th : corpus.theorems()) stmts.push_back(th.statement);
  features_ = extract_all(stmts);
  for (const auto& fs : features_) vectors_.push_back(space_.intern_all(fs));
  for (const auto& th : corpus.theorems()) deps_.push_back(th.theorem_deps());
}

Prediction Predictor::predict(const FeatureSet& goal, const std::vector<std::size_t>& accessible, std::size_t k,
                              std::size_t limit) const {
  FeatureIndex index(vectors_, accessible);
  Prediction p;
  p.neighbors = index.k_nearest(space_.encode(goal), k);
  p.ranked = rank_premises(p.neighbors, deps_, accessible, limit);
  return p;
}

ExperimentReport run_problems(const Signature& sig, std::vector<HolProblem> problems, const HarnessOptions& options,
                              bool apply_budget, std::string mode) {
  check_provers(options);
  ExperimentReport rep;
  rep.mode = std::move(mode);
  for (const auto& p : options.provers) rep.provers.push_back(p.name);
  rep.problems = std::move(problems);
  std::size_t nq = options.provers.size();
  rep.results.resize(rep.problems.size() * nq);

  long tasks = static_cast<long>(rep.results.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count(options.jobs))
  for (long t = 0; t < tasks; ++t) {
    const HolProblem& hp = rep.problems[static_cast<std::size_t>(t) / nq];
    const ProverConfig& cfg = options.provers[static_cast<std::size_t>(t) % nq];
    ProblemResult& out = rep.results[static_cast<std::size_t>(t)];
    out.atp.problem = hp.label;
    out.atp.prover = cfg.name;
    try {
      std::vector<NamedTerm> prem = hp.premises;
      if (apply_budget && prem.size() > cfg.budget) prem.resize(cfg.budget);
      out.premises = prem.size();
      TranslatedProblem tp = translate_problem(sig, prem, hp.goal, options.translate);
      out.atp = run_prover(tp.problem, cfg, hp.label);
      if (out.atp.core) {
        out.core = tp.user_core(out.atp.core->axioms);
        if (options.confirm_cores) out.confirm = minimize_core(tp.problem, *out.atp.core, cfg);
      }
    } catch (const std::exception& e) {
      out.atp.status = SzsStatus::Error;
      out.atp.detail = e.what();
    }
  }
  return rep;
}

ExperimentReport reprove(const Corpus& corpus, SplitMode split, const HarnessOptions& options) {
  return run_problems(corpus.sig, reprove_problems(corpus, split), options, false,
                      split == SplitMode::Unsplit ? "reprove/unsplit" : "reprove/conjuncts");
}

ExperimentReport experiment(const Corpus& corpus, AccessRelation relation, const HarnessOptions& options) {
  check_provers(options);
  if (relation == AccessRelation::ExactDeps) {
    return run_problems(corpus.sig, reprove_problems(corpus, SplitMode::Unsplit), options, false,
                        std::string("experiment/") + relation_name(relation));
  }
  std::size_t limit = 0;
  for (const auto& p : options.provers) limit = std::max(limit, p.budget);
  Predictor predictor(corpus);
  std::vector<HolProblem> problems;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& th = corpus.theorem(i);
    if (th.definition) continue;
    auto pred = predictor.predict(predictor.features()[i], accessible_set(corpus, i, relation), options.k, limit);
    HolProblem p{th.name, th.id.theory, {}, th.statement};
    for (const auto& r : pred.ranked) p.premises.push_back({corpus.theorem(r.id).name, corpus.theorem(r.id).statement});
    problems.push_back(std::move(p));
  }
  return run_problems(corpus.sig, std::move(problems), options, true,
                      std::string("experiment/") + relation_name(relation));
}

// --- advice ------------------------------------------------------------------

Advice advise(const Corpus& corpus, const std::string& goal, AccessRelation relation, const HarnessOptions& options) {
  check_provers(options);
  Advice adv;
  auto t0 = Clock::now();

  // Goal: conjecture name, theorem name, file, or formula text.
  Term statement;
  std::optional<std::size_t> position;
  std::string theory = corpus.theories().empty() ? "" : corpus.theories().back();
  auto conj = std::find_if(corpus.conjectures().begin(), corpus.conjectures().end(),
                           [&](const ObjectEntry& e) { return e.name == goal; });
  if (conj != corpus.conjectures().end()) {
    statement = conj->statement();
    theory = conj->theory;
  } else if (auto found = corpus.find(goal)) {
    position = *found;
    statement = corpus.theorem(*found).statement;
  } else {
    std::string text = goal;
    std::error_code ec;
    if (goal.find('\n') == std::string::npos && std::filesystem::is_regular_file(goal, ec)) {
      std::ifstream in(goal);
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    statement = parse_term(text, corpus.sig);
  }
  adv.times.parse = since(t0);

  auto t1 = Clock::now();
  std::vector<std::size_t> accessible;
  if (position) {
    accessible = accessible_set(corpus, *position, relation);
  } else if (relation == AccessRelation::ExactDeps || relation == AccessRelation::TransitiveDeps) {
    throw Error(Errc::Usage, std::string("relation ") + relation_name(relation) + " needs a recorded theorem as goal");
  } else {
    std::set<std::string> loaded;
    std::vector<std::string> stack{theory};
    while (!stack.empty()) {
      std::string th = stack.back();
      stack.pop_back();
      if (th.empty() || !loaded.insert(th).second) continue;
      for (const auto& p : corpus.parents(th)) stack.push_back(p);
    }
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (relation == AccessRelation::LinearOrder || loaded.count(corpus.theorem(i).id.theory)) accessible.push_back(i);
  }
  std::size_t limit = 0;
  for (const auto& p : options.provers) limit = std::max(limit, p.budget);
  Predictor predictor(corpus);
  auto pred = predictor.predict(extract(statement), accessible, options.k, limit);
  std::vector<NamedTerm> ranked;
  for (const auto& r : pred.ranked) {
    ranked.push_back({corpus.theorem(r.id).name, corpus.theorem(r.id).statement});
    adv.offered.push_back(corpus.theorem(r.id).name);
  }
  adv.times.predict = since(t1);

  auto t2 = Clock::now();
  std::vector<TranslatedProblem> problems;
  for (const auto& cfg : options.provers) {
    std::vector<NamedTerm> prem(ranked.begin(), ranked.begin() + static_cast<long>(std::min(cfg.budget, ranked.size())));
    problems.push_back(translate_problem(corpus.sig, prem, statement, options.translate));
  }
  adv.times.translate = since(t2);

  auto t3 = Clock::now();
  adv.attempts.resize(options.provers.size());
  long n = static_cast<long>(options.provers.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count(options.jobs))
  for (long q = 0; q < n; ++q) {
    auto& a = adv.attempts[static_cast<std::size_t>(q)];
    try {
      a = run_prover(problems[static_cast<std::size_t>(q)].problem, options.provers[static_cast<std::size_t>(q)], goal);
    } catch (const std::exception& e) {
      a.prover = options.provers[static_cast<std::size_t>(q)].name;
      a.status = SzsStatus::Error;
      a.detail = e.what();
    }
  }
  adv.times.prove = since(t3);

  // The fastest proof wins; ties go to the earlier prover.
  std::optional<std::size_t> best;
  for (std::size_t q = 0; q < adv.attempts.size(); ++q)
    if (proves(adv.attempts[q].status) && (!best || adv.attempts[q].seconds < adv.attempts[*best].seconds)) best = q;
  if (!best) {
    adv.status = adv.attempts.empty() ? SzsStatus::Error : adv.attempts.front().status;
    return adv;
  }
  const auto& win = adv.attempts[*best];
  adv.proved = true;
  adv.prover = win.prover;
  adv.status = win.status;
  auto t4 = Clock::now();
  adv.minimized = minimize_core(problems[*best].problem, *win.core, options.provers[*best]);
  adv.premises = problems[*best].user_core(adv.minimized->axioms);
  adv.times.minimize = since(t4);
  return adv;
}

std::string format_advice(const Advice& a) {
  std::string out;
  if (a.proved) {
    out += "Proof found by " + a.prover + " (" + szs_name(a.status) + ")\n";
    out += "Relevant theorems:";
    for (const auto& p : a.premises) out += " " + p;
    out += "\n";
    if (a.minimized)
      out += std::string("Core re-run: ") + (a.minimized->confirmed ? "proves" : "not confirmed") + " after " +
             std::to_string(a.minimized->runs) + " run(s)\n";
  } else {
    out += "No proof found\n";
  }
  for (const auto& at : a.attempts) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-10s %-18s %.3fs", at.prover.c_str(), szs_name(at.status), at.seconds);
    out += buf;
    if (!at.detail.empty() && !proves(at.status)) out += "  " + at.detail.substr(0, at.detail.find('\n'));
    out += "\n";
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "Timings (s): parse %.3f  predict %.3f  translate %.3f  prove %.3f  minimize %.3f\n", a.times.parse,
                a.times.predict, a.times.translate, a.times.prove, a.times.minimize);
  return out + buf + "Offered premises: " + std::to_string(a.offered.size()) + "\n";
}

}  // namespace hammer
