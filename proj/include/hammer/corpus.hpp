#pragma once

// A theorem corpus: theories in build order, their declarations and named
// theorems with per-conjunct dependencies.
//
// On disk a corpus is a directory holding one `.thy` file
//
//   theory(NAME, [ANCESTOR, ...]).      % one line per theory, build order
//
// and per theory `NAME.tt` plus an optional `NAME.deps`:
//
//   deps(THM_cK, [DEP_cJ, OTHER, ...]).
//
// A dependency without a `_cJ` suffix stands for every conjunct of that
// theorem; a target without the suffix sets all of its conjuncts.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "hammer/logic.hpp"
#include "hammer/syntax.hpp"

namespace hammer {

struct TheoremId {
  std::string theory;
  std::size_t seq = 0;  // number of theorems named before it in the theory
  friend auto operator<=>(const TheoremId&, const TheoremId&) = default;
};

// Conjunct `conjunct` (1-based) of theorem `theorem` (build-order position).
struct ConjunctRef {
  std::size_t theorem = 0;
  std::size_t conjunct = 1;
  friend auto operator<=>(const ConjunctRef&, const ConjunctRef&) = default;
};

struct TheoremEntry {
  TheoremId id;
  std::string name;           // final name, after overwrite renaming
  std::string original_name;  // name as exported
  Term statement;
  bool definition = false;
  std::vector<Conjunct> conjuncts;
  std::vector<std::set<ConjunctRef>> deps;  // indexed by conjunct - 1

  // Parent theorems of all conjunct dependencies, ascending.
  std::vector<std::size_t> theorem_deps() const;
};

enum class AccessRelation { ExactDeps, TransitiveDeps, LoadedTheories, LinearOrder };

const char* relation_name(AccessRelation r);
std::optional<AccessRelation> parse_relation(std::string_view text);

class Corpus {
 public:
  Signature sig;

  void add_theory(const std::string& name, const std::vector<std::string>& parents);
  // Parses `.tt` text into `theory`; theories must be loaded in build order.
  void load_tt(const std::string& theory, std::string_view text);
  void load_deps(const std::string& theory, std::string_view text);
  std::size_t add_theorem(const std::string& theory, const std::string& name, const Term& statement,
                          bool definition = false);
  void set_deps(std::size_t theorem, std::size_t conjunct, std::set<ConjunctRef> deps);
  // Type or constant declaration; registers it in `sig`.
  void add_declaration(ObjectEntry entry);
  void add_conjecture(ObjectEntry entry);

  const std::vector<std::string>& theories() const { return theory_order_; }
  const std::vector<std::string>& parents(const std::string& theory) const;
  const std::vector<ObjectEntry>& objects() const { return objects_; }
  const std::vector<TheoremEntry>& theorems() const { return theorems_; }
  const TheoremEntry& theorem(std::size_t i) const { return theorems_.at(i); }
  std::size_t size() const { return theorems_.size(); }
  // Conjecture entries (role `conj`) in file order; not part of the theorem table.
  const std::vector<ObjectEntry>& conjectures() const { return conjectures_; }

  // Theorem by final name, falling back to the latest bearer of an
  // exported name strictly before `before`.
  std::optional<std::size_t> find(const std::string& name, std::size_t before = SIZE_MAX) const;
  // Resolves `NAME` (all conjuncts) or `NAME_cK`; throws UnknownIdentifier.
  std::vector<ConjunctRef> resolve(const std::string& name, std::size_t before = SIZE_MAX) const;
  std::string conjunct_name(const ConjunctRef& ref) const;

  std::string deps_text(const std::string& theory) const;
  std::string thy_text() const;
  std::string tt_text(const std::string& theory) const;

 private:
  std::vector<std::string> theory_order_;
  std::map<std::string, std::vector<std::string>> parents_;
  std::vector<ObjectEntry> objects_;
  std::vector<std::size_t> object_theorem_;  // theorem position or SIZE_MAX
  std::vector<ObjectEntry> conjectures_;
  std::vector<TheoremEntry> theorems_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_original_;
  std::map<std::string, std::size_t> theory_counts_;
};

// Reads `<dir>/*.thy` and the per-theory files. Throws Io / ParseError.
Corpus load_corpus(const std::filesystem::path& dir);
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Final names for chronological naming events: the last bearer keeps the
// name, earlier bearers become `name~k` with k the overwrite generation.
std::map<TheoremId, std::string> rename_overwritten(const std::vector<std::pair<std::string, TheoremId>>& events);

// Renames every non-builtin object to `ns/theory/name`. Idempotent.
Corpus qualify(const Corpus& corpus, const std::string& ns);

// Ascending build-order positions.
std::vector<std::size_t> accessible_set(const Corpus& corpus, std::size_t target, AccessRelation relation);
// Build order, checked to be a linear extension of the dependencies.
std::vector<std::size_t> linear_order(const Corpus& corpus);

}  // namespace hammer
