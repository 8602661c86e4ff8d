#pragma once

// TPTP FOF and SMT-LIB2 problem text, SZS status and unsat-core read-back.

#include <string>
#include <string_view>
#include <vector>

#include "hammer/fof.hpp"

namespace hammer {

// Symbols print bare when they are TPTP lower words, otherwise quoted.
// Formula names print bare only when they match [a-z][a-z0-9_]*.
std::string tptp_symbol(std::string_view name);
std::string tptp_formula_name(std::string_view name);

std::string print_term(const FofTerm& t);
std::string print_formula(const FofFormula& f);
std::string print_problem(const FofProblem& p);

// Accepts the printed subset plus `<=`, `<~>`, `~|` and `~&`, `%` and
// `/* */` comments. Throws ParseError with line and column.
FofProblem parse_problem(std::string_view text);

// SMT-LIB2 rendering over one sort U with named assertions; the conjecture
// is asserted negated. Ends with (check-sat) and (get-unsat-core).
std::string print_smt2(const FofProblem& p);

enum class SzsStatus { Theorem, Unsatisfiable, CounterSatisfiable, Satisfiable, Timeout, GaveUp, Error };

const char* szs_name(SzsStatus s);
bool proves(SzsStatus s);

struct SzsResult {
  SzsStatus status = SzsStatus::Error;
  std::string detail;  // raw diagnostics for Error
};

// First `SZS status` line, or an SMT `unsat`/`sat`/`unknown` answer.
// Unsatisfiable becomes Theorem when the problem has a conjecture, and an
// SMT `sat` becomes CounterSatisfiable. Total: never throws.
SzsResult parse_szs(std::string_view output, bool killed = false, int exit_code = 0, bool has_conjecture = true);

struct CoreResult {
  std::vector<std::string> axioms;  // problem axiom names, problem order
  bool complete = true;             // false: no derivation found, all axioms returned
};

// Axioms referenced by the derivation in `output`: `fof(NAME, axiom` and
// `cnf(NAME, axiom` lines, `file(..., NAME)` sources, `[input NAME]`
// annotations, or the list printed after an SMT `unsat`.
CoreResult extract_core(std::string_view output, const FofProblem& problem);

}  // namespace hammer
