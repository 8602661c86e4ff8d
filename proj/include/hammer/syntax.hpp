#pragma once

// Textual syntax of the corpus export format:
//
//   tt(NAME, ROLE, FORMULA).
//
// ROLE is `ty` (type or constant declaration), `ax` (theorem), `def`
// (definitional theorem) or `conj` (conjecture). Formulas use a small
// THF0-like language: `$t`, right-associative `>`, binders `![x:T]:`,
// `?[x:T]:` and `^[x:T]:`, connectives `~ & | => =`, application by
// juxtaposition and explicit type arguments for polymorphic constants,
// written `(HD int)`. `%` starts a comment.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hammer/logic.hpp"

namespace hammer {

bool is_bare_name(std::string_view name);
// Bare if possible, otherwise single-quoted with backslash escapes.
std::string quote_name(std::string_view name);

std::string print_type(const Type& ty);
// Canonical expression printing (no outer parentheses).
std::string print_term(const Term& t);
// Printing used for theorem lines: type-variable binder prefix and outer
// parentheses, e.g. `(![n:int]: (SUC n = n))`.
std::string print_formula(const Term& t);

Type parse_type(std::string_view text, const Signature& sig, const std::vector<std::string>& type_vars = {});
// Parses and typechecks a closed term against `sig`.
Term parse_term(std::string_view text, const Signature& sig);

enum class Role { TypeDecl, ConstDecl, Theorem, Conjecture };

struct TypeDeclInfo {
  std::size_t arity = 0;
  friend bool operator==(const TypeDeclInfo&, const TypeDeclInfo&) = default;
};

struct ObjectEntry {
  std::string name;
  Role role = Role::Theorem;
  std::variant<TypeDeclInfo, ConstInfo, Term> formula;
  std::string theory;
  std::size_t seq = 0;      // ordinal of the entry within its theory
  bool definition = false;  // role `def`: stored, excluded from evaluation

  const Term& statement() const { return std::get<Term>(formula); }
};

bool same_entry(const ObjectEntry& a, const ObjectEntry& b);

// Parses entries in file order, extending `sig` with each declaration so
// later lines may use it. Errors carry line/column.
std::vector<ObjectEntry> parse_tt(std::string_view text, Signature& sig, const std::string& theory = {});
std::string print_tt(const ObjectEntry& entry);

// Small reader for the Prolog-style sidecar files (.thy, .deps, .trace,
// .fea): `functor(arg, ...).` where an argument is an atom, a quoted atom,
// a list `[...]` or a nested compound.
struct Fact {
  struct Arg {
    enum class Kind { Atom, List, Compound } kind = Kind::Atom;
    std::string text;       // atom text or compound functor
    std::vector<Arg> items; // list items or compound arguments
    bool is_atom() const { return kind == Kind::Atom; }
    bool is_list() const { return kind == Kind::List; }
  };
  std::string functor;
  std::vector<Arg> args;
  int line = 0;
};

std::vector<Fact> parse_facts(std::string_view text);
std::string print_fact_atom(std::string_view atom);

}  // namespace hammer
