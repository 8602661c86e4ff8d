#pragma once

// Untyped first-order terms, formulas and problems.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hammer {

struct FofTerm {
  enum class Kind { Var, Fn } kind = Kind::Fn;
  std::string name;
  std::vector<FofTerm> args;

  static FofTerm var(std::string name) { return {Kind::Var, std::move(name), {}}; }
  static FofTerm fn(std::string name, std::vector<FofTerm> args = {}) {
    return {Kind::Fn, std::move(name), std::move(args)};
  }
  bool is_var() const { return kind == Kind::Var; }
  friend bool operator==(const FofTerm&, const FofTerm&) = default;
};

struct FofFormula {
  enum class Kind { True, False, Pred, Eq, Not, And, Or, Imp, Iff, Forall, Exists } kind = Kind::True;
  std::string name;               // Pred symbol
  std::vector<FofTerm> args;      // Pred arguments; Eq: {lhs, rhs}
  std::vector<FofFormula> subs;   // Not: 1; binary: 2; quantifiers: 1
  std::vector<std::string> vars;  // quantified variables

  static FofFormula truth(bool v) { return {v ? Kind::True : Kind::False, {}, {}, {}, {}}; }
  static FofFormula pred(std::string name, std::vector<FofTerm> args = {}) {
    return {Kind::Pred, std::move(name), std::move(args), {}, {}};
  }
  static FofFormula eq(FofTerm l, FofTerm r) { return {Kind::Eq, {}, {std::move(l), std::move(r)}, {}, {}}; }
  static FofFormula negate(FofFormula f) { return {Kind::Not, {}, {}, {std::move(f)}, {}}; }
  static FofFormula binary(Kind k, FofFormula l, FofFormula r) { return {k, {}, {}, {std::move(l), std::move(r)}, {}}; }
  static FofFormula quant(Kind k, std::vector<std::string> vars, FofFormula body) {
    if (vars.empty()) return body;
    return {k, {}, {}, {std::move(body)}, std::move(vars)};
  }
  bool is_binary() const {
    return kind == Kind::And || kind == Kind::Or || kind == Kind::Imp || kind == Kind::Iff;
  }
  bool is_quant() const { return kind == Kind::Forall || kind == Kind::Exists; }
  friend bool operator==(const FofFormula&, const FofFormula&) = default;
};

struct FofAnnotated {
  std::string name;
  std::string role;  // axiom, conjecture, ...
  FofFormula formula;
  friend bool operator==(const FofAnnotated&, const FofAnnotated&) = default;
};

struct FofProblem {
  std::vector<FofAnnotated> formulas;  // axioms first, conjecture (if any) last
  friend bool operator==(const FofProblem&, const FofProblem&) = default;

  const FofAnnotated* conjecture() const;
  std::vector<std::string> axiom_names() const;
};

struct SymbolUse {
  bool predicate = false;
  std::size_t arity = 0;
  friend bool operator==(const SymbolUse&, const SymbolUse&) = default;
};

// Symbol table of a problem; problems are well-formed when every symbol is
// used with one arity and either only as a predicate or only as a function.
struct SymbolReport {
  std::map<std::string, SymbolUse> symbols;
  std::vector<std::string> conflicts;
};

SymbolReport scan_symbols(const FofProblem& p);
// Free variables of a formula, sorted.
std::vector<std::string> free_vars(const FofFormula& f);

// Equivalent formula with quantifiers pushed inward: universals over
// conjunctions and existentials over disjunctions are distributed, vacuous
// bound variables dropped and directly nested binders of one kind merged.
FofFormula miniscope(const FofFormula& f);

// Symbols of the first-order encoding itself: type tags, application,
// truth of a boolean term, the function type and the boolean type.
const std::set<std::string>& encoding_symbols();

}  // namespace hammer
