#pragma once

// Higher-order premises and conjecture to an untyped first-order problem:
// beta-normalization, lambda-lifting, removal of boolean arguments, then
// the apply-functor encoding with type tags s(TYPE, TERM).
//
// Reserved first-order symbols: s/2 (tag), ap/2 (application), bool/1
// (truth predicate), fn/2 (function type) and bool1/0 (the boolean type).

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hammer/fof.hpp"
#include "hammer/logic.hpp"

namespace hammer {

enum class TagMode {
  // Variables, plus applications whose generic result type is a bare type
  // variable of the head constant. Not stable under substitution: a
  // constant instance never matches a tagged variable pattern.
  Minimal,
  // Every term occurrence.
  All,
};

enum class BoolArgMode {
  // ?B. (B <=> phi) & atom[B] at the atom (remove_bool_args).
  Existential,
  // A fresh constant applied to the free variables of phi, defined once
  // by !x. c x <=> phi (BoolLifter).
  Lifted,
};

struct TranslateOptions {
  TagMode tags = TagMode::All;
  BoolArgMode bool_args = BoolArgMode::Lifted;
  // Adds ![T,X]: s(T,X) = X, letting the prover see through tags.
  bool tag_helper = false;
  // Adds ![X,Y]: ((bool(s(bool1,X)) <=> bool(s(bool1,Y))) => s(bool1,X) = s(bool1,Y))
  // when the problem mentions the boolean type.
  bool bool_ext = true;
};

struct LiftedDef {
  // lam_k: fresh constant of first-order arity 0; prop_k: a function of
  // the captured variables, never a predicate
  std::string symbol;
  std::size_t arity = 0;  // captured variables plus abstracted variables
  Term axiom;          // closed equation, lambda-free outside quantifier bodies
};

// Replaces every abstraction that is not a quantifier body by a fresh
// constant applied to its free variables. Identical abstractions (up to
// alpha) share one constant. Quantifiers applied to non-abstractions are
// eta-expanded first. Fresh constants are added to `sig`.
class LambdaLifter {
 public:
  explicit LambdaLifter(Signature& sig) : sig_(sig) {}
  Term lift(const Term& t);
  const std::vector<LiftedDef>& defs() const { return defs_; }

 private:
  Term lift_abs(const Term& t);
  Signature& sig_;
  std::map<std::string, Term> cache_;  // alpha key of closed abstraction -> applied constant head
  std::vector<LiftedDef> defs_;
  std::size_t counter_ = 0;
};

// Every non-variable boolean argument phi of an atom becomes a fresh
// boolean variable B, bound at the atom as ?B. (B <=> phi) & atom[B].
Term remove_bool_args(const Term& formula);

// Every non-variable boolean argument phi of an atom becomes a fresh
// constant prop_k applied to the free variables of phi, with the
// definition !x. prop_k x = phi. Identical arguments (up to alpha) share
// one constant. Input must be lambda-free; fresh constants go into `sig`.
class BoolLifter {
 public:
  explicit BoolLifter(Signature& sig) : sig_(sig) {}
  Term lift(const Term& formula);
  const std::vector<LiftedDef>& defs() const { return defs_; }

 private:
  Term atom(const Term& t);
  Term replace(const Term& u);
  Signature& sig_;
  std::map<std::string, Term> cache_;
  std::vector<LiftedDef> defs_;
  std::size_t counter_ = 0;
};

// Violations of the first-order shape expected after lifting and boolean
// argument removal: abstractions outside quantifier bodies and boolean
// arguments other than variables and applications of the `truth_terms`
// constants. Empty when the term is clean.
std::vector<std::string> first_order_residue(const Term& formula, const std::set<std::string>& truth_terms = {});

// Lowercase first letter, everything except [A-Za-z0-9_] percent-encoded.
std::string mangle_symbol(std::string_view name);
// Type as a first-order term with the plain mangling; type variables
// become upper-case variables.
FofTerm flatten_type(const Type& ty);

struct NamedTerm {
  std::string name;
  Term term;
};

struct AxiomOrigin {
  enum class Kind { Premise, Lifted, Proxy, Helper } kind = Kind::Premise;
  std::string source;  // premise name, lifted constant or proxied constant
};

struct TranslatedProblem {
  FofProblem problem;
  std::map<std::string, AxiomOrigin> origins;      // axiom name -> origin
  std::map<std::string, std::string> symbols;      // first-order symbol -> HOL name
  std::vector<LiftedDef> lifted;

  // Premise names among `axioms`, in the order given; internal axioms dropped.
  std::vector<std::string> user_core(const std::vector<std::string>& axioms) const;
  // Problem restricted to the given premises (plus all internal axioms).
  FofProblem restrict_to(const std::vector<std::string>& premises) const;
};

TranslatedProblem translate_problem(const Signature& sig, const std::vector<NamedTerm>& premises,
                                    const std::optional<Term>& conjecture, const TranslateOptions& options = {});

}  // namespace hammer
