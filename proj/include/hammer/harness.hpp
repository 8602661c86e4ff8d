#pragma once

// Experiments and the advice loop: accessible facts, k-NN prediction,
// translation, parallel prover runs, cores and reports.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hammer/corpus.hpp"
#include "hammer/knn.hpp"
#include "hammer/prover.hpp"
#include "hammer/translate.hpp"

namespace hammer {

struct HarnessOptions {
  std::vector<ProverConfig> provers;
  std::size_t jobs = 0;  // worker threads; 0 uses every core
  std::size_t k = kDefaultK;
  TranslateOptions translate;
  // Re-run every proof on its core alone (the minimize_core loop).
  bool confirm_cores = false;
};

enum class SplitMode { Unsplit, Conjuncts };

// One higher-order problem: the goal and the named premises offered for it.
struct HolProblem {
  std::string label;   // theorem or conjunct name
  std::string theory;
  std::vector<NamedTerm> premises;
  Term goal;
};

struct MinimizeResult {
  std::vector<std::string> axioms;  // first-order axiom names of the final core
  std::size_t runs = 0;
  // The returned core proved on its own; the first re-run is on the
  // original core, so this is false only when that run failed.
  bool confirmed = false;
  // The last re-run failed; `axioms` is the last core that proved.
  bool fallback = false;
};

// Re-runs `problem` restricted to the core until the core stops shrinking
// or a run fails to prove.
MinimizeResult minimize_core(const FofProblem& problem, const CoreResult& core, const ProverConfig& config);

struct ProblemResult {
  AtpResult atp;
  std::size_t premises = 0;            // premises offered
  std::vector<std::string> core;       // user-facing premise names
  std::optional<MinimizeResult> confirm;
};

struct ExperimentReport {
  std::string mode;  // "reprove/unsplit", "experiment/loaded", ...
  std::vector<std::string> provers;
  std::vector<HolProblem> problems;
  // results[p * provers.size() + q]: problem p, prover q.
  std::vector<ProblemResult> results;

  std::size_t evaluated() const { return problems.size(); }
  const ProblemResult& result(std::size_t problem, std::size_t prover) const {
    return results.at(problem * provers.size() + prover);
  }
  bool solved(std::size_t problem, std::size_t prover) const { return proves(result(problem, prover).atp.status); }

  std::size_t solved_count(std::size_t prover) const;
  std::size_t union_count() const;
  // Problems solved by this prover and no other.
  std::size_t unique_count(std::size_t prover) const;
  std::size_t countersat_count(std::size_t prover) const;
  // Proofs whose confirming core re-run proved, over proofs that had one.
  std::pair<std::size_t, std::size_t> confirmed_cores() const;

  // One row per (problem, prover).
  std::string csv() const;
  // Per-prover summary, union, then per-theory breakdown.
  std::string table() const;
};

// Exact-dependency problems for every non-definition theorem (whole
// statements with the unioned dependencies) or for every conjunct.
std::vector<HolProblem> reprove_problems(const Corpus& corpus, SplitMode split);

struct Prediction {
  std::vector<Ranked> ranked;
  std::vector<Neighbor> neighbors;
};

// Features of every corpus theorem, interned once; predict() ranks
// premises for a goal by k-NN over the accessible positions.
class Predictor {
 public:
  explicit Predictor(const Corpus& corpus);
  const std::vector<FeatureSet>& features() const { return features_; }
  Prediction predict(const FeatureSet& goal, const std::vector<std::size_t>& accessible, std::size_t k,
                     std::size_t limit) const;

 private:
  FeatureSpace space_;
  std::vector<FeatureSet> features_;
  std::vector<FeatureVec> vectors_;
  std::vector<std::vector<std::size_t>> deps_;
};

// Runs every (problem, prover) pair on the worker pool. Each prover sees
// the problem's first `budget` premises when `apply_budget` is set.
ExperimentReport run_problems(const Signature& sig, std::vector<HolProblem> problems, const HarnessOptions& options,
                              bool apply_budget, std::string mode);

ExperimentReport reprove(const Corpus& corpus, SplitMode split, const HarnessOptions& options);

// ED offers the exact dependencies; the other relations offer the k-NN
// ranking over the accessible set, cut per prover at its budget.
ExperimentReport experiment(const Corpus& corpus, AccessRelation relation, const HarnessOptions& options);

struct StageTimes {
  double parse = 0;
  double predict = 0;
  double translate = 0;
  double prove = 0;
  double minimize = 0;
};

struct Advice {
  bool proved = false;
  std::string prover;
  SzsStatus status = SzsStatus::Error;
  std::vector<std::string> offered;   // predicted premises, ranked
  std::vector<std::string> premises;  // user-facing core
  std::optional<MinimizeResult> minimized;
  std::vector<AtpResult> attempts;    // one per prover
  StageTimes times;
};

// `goal` is the name of a corpus conjecture, a path to a file holding a
// formula, or the formula itself. Accessible facts follow `relation`
// (loaded theories by default); exact and transitive need a recorded
// theorem as goal.
Advice advise(const Corpus& corpus, const std::string& goal, AccessRelation relation, const HarnessOptions& options);

std::string format_advice(const Advice& advice);

}  // namespace hammer
