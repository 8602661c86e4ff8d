#pragma once

// Dependency recording over proof traces.
//
// Every theorem value carries a Tag. A tag is named once its theorem (or a
// conjunct of a named theorem) has an identifier; otherwise it holds a
// DepTree mirroring the conjunction structure of the theorem, whose leaves
// are sets of conjunct identifiers.
//
// Trace files (`.trace`) are read with parse_facts:
//
//   theory(NAME).
//   step(LABEL, RULE, [PREMISE_LABEL, ...], PAYLOAD).
//   step(LABEL, RULE, [PREMISE_LABEL, ...], PAYLOAD, NAME).   % names the result
//
// RULE is THM (PAYLOAD names an earlier theorem), AXIOM, ORACLE (PAYLOAD is
// the axiom or oracle name), CONJ, CONJUNCT1, CONJUNCT2, GEN, SPEC, SUBST or
// OTHER. SUBST takes the rewritten theorem first, then one equation per
// template variable; its PAYLOAD lists `VAR:term` or `VAR:pred` per equation.
// Other rules ignore PAYLOAD (conventionally `none`).

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hammer/corpus.hpp"

namespace hammer {

// A named theorem, or the conjunct of it reached by `path`.
struct DepId {
  TheoremId theorem;
  std::vector<Side> path;
  friend auto operator<=>(const DepId&, const DepId&) = default;
};

std::string dep_id_str(const DepId& id);

struct DepTree {
  std::set<DepId> ids;            // leaf payload
  std::vector<DepTree> children;  // empty for a leaf, else {left, right}

  static DepTree leaf(std::set<DepId> ids = {}) { return DepTree{std::move(ids), {}}; }
  static DepTree node(DepTree l, DepTree r);
  bool is_leaf() const { return children.empty(); }
  friend bool operator==(const DepTree&, const DepTree&) = default;
};

std::string tree_str(const DepTree& t);

struct Tag {
  std::optional<DepId> dependency_id;  // nullopt: unnamed
  DepTree deps;
  std::set<std::string> oracles;
  std::set<std::string> axioms;
  friend bool operator==(const Tag&, const Tag&) = default;
};

enum class Rule { Thm, Axiom, Oracle, Conj, Conjunct1, Conjunct2, Gen, Spec, Subst, Other };

const char* rule_name(Rule r);
std::optional<Rule> parse_rule(std::string_view text);

// One SUBST template variable; `predicate` when it is boolean or returns a boolean.
struct SubstVar {
  std::string name;
  bool predicate = false;
};

DepTree passed_deps(const Tag& tag);
DepTree flatten(const DepTree& tree);
std::set<DepId> all_ids(const DepTree& tree);

// Conclusion tag of an inference. For SUBST, premises are the rewritten
// theorem followed by the equations and `subst` has one entry per equation.
// A CONJUNCT rule on an unnamed leaf flattens and sets `*branch_missing`.
Tag step_tag(Rule rule, const std::vector<Tag>& premises, const std::vector<SubstVar>& subst = {},
             bool* branch_missing = nullptr);

// Conjunct identifiers are 1-based positions in split_conjuncts order.
struct ConjunctId {
  TheoremId theorem;
  std::size_t conjunct = 1;
  friend auto operator<=>(const ConjunctId&, const ConjunctId&) = default;
};

// Conjunct addresses of named theorems, used to split identifiers.
using ConjunctLookup = std::map<TheoremId, std::vector<ConjunctAddress>>;

// Conjunct k of `statement` gets the identifiers at its closest ancestor in
// `tree`, each expanded to the conjuncts it covers. Result indexed by k - 1.
std::vector<std::set<ConjunctId>> recover_conjunct_deps(const Term& statement, const DepTree& tree,
                                                       const ConjunctLookup& lookup);

struct TraceStep {
  std::string label;
  Rule rule = Rule::Other;
  std::vector<std::string> premises;
  std::string payload;                 // THM / AXIOM / ORACLE argument
  std::vector<SubstVar> subst;         // SUBST argument
  std::optional<std::string> name;     // names the result
  std::string theory;                  // theory active at this step
  int line = 0;
};

std::vector<TraceStep> parse_trace(std::string_view text, const std::string& default_theory = {});

struct NamedRecord {
  TheoremId id;
  std::string name;
  DepTree tree;  // stored at naming time
  std::set<std::string> oracles;
  std::set<std::string> axioms;
};

// Replays traces in order. THM steps resolve names against theorems named
// earlier in the replay first, then against `corpus`.
class Replayer {
 public:
  explicit Replayer(const Corpus* corpus = nullptr) : corpus_(corpus) {}

  void run(const std::vector<TraceStep>& steps);
  const std::vector<NamedRecord>& named() const { return named_; }
  const Tag& tag(const std::string& label) const;
  // Steps where a CONJUNCT rule had to flatten an unnamed leaf.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  const Corpus* corpus_;
  std::map<std::string, Tag> labels_;
  std::map<std::string, TheoremId> names_;
  std::map<std::string, std::size_t> counts_;
  std::vector<NamedRecord> named_;
  std::vector<std::string> warnings_;
};

// Recovers per-conjunct dependencies of every theorem named by the replay
// and stores them in `corpus`. Named theorems must match the corpus by
// (theory, seq) and exported name. Returns the number of theorems updated.
std::size_t apply_recovered(Corpus& corpus, const Replayer& replay);

// Reads `<dir>/<theory>.trace` for every theory that has one and applies
// the recovered dependencies. Returns the number of traces read.
std::size_t replay_corpus_traces(Corpus& corpus, const std::filesystem::path& dir);

}  // namespace hammer
