#pragma once

// Simply typed lambda terms with shallow polymorphism.
//
// Types and terms are immutable values sharing structure through
// shared_ptr; copying is cheap and every value is safe to read from any
// number of threads. Bound variables are named; alpha-equivalence is decided
// structurally (alpha_equal / alpha_key), substitution renames on capture.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hammer/error.hpp"

namespace hammer {

namespace builtin {
inline constexpr const char* kBool = "bool";
inline constexpr const char* kFun = "fun";
inline constexpr const char* kEq = "=";
inline constexpr const char* kAnd = "&";
inline constexpr const char* kOr = "|";
inline constexpr const char* kImp = "=>";
inline constexpr const char* kNot = "~";
inline constexpr const char* kForall = "!";
inline constexpr const char* kExists = "?";
inline constexpr const char* kTrue = "$true";
inline constexpr const char* kFalse = "$false";
}  // namespace builtin

class Type {
 public:
  enum class Kind : std::uint8_t { Var, App };

  Type() = default;  // null; only produced by failed inference

  static Type var(std::string name);
  static Type app(std::string ctor, std::vector<Type> args = {});
  static Type fun(Type domain, Type range);
  static Type boolean();

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::Var; }
  bool is_fun() const;
  bool is_bool() const;
  // Variable name or constructor name.
  const std::string& name() const { return node_->name; }
  const std::vector<Type>& args() const { return node_->args; }
  const Type& domain() const { return node_->args[0]; }
  const Type& range() const { return node_->args[1]; }

  friend bool operator==(const Type& a, const Type& b);
  friend std::strong_ordering operator<=>(const Type& a, const Type& b);

  // Debug rendering in the corpus type syntax.
  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Type> args;
  };
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using TypeSubst = std::map<std::string, Type>;

Type type_subst(const Type& ty, const TypeSubst& subst);
// Type variables in order of first occurrence (left to right), appended to out.
void collect_type_vars(const Type& ty, std::vector<std::string>& out);
void collect_type_ctors(const Type& ty, std::vector<std::string>& out);
// Number of leading arrows and the final non-function result.
std::size_t arrow_count(const Type& ty);
Type final_range(const Type& ty);

class Term {
 public:
  enum class Kind : std::uint8_t { Var, Const, App, Abs };

  Term() = default;

  static Term var(std::string name, Type type);
  // `type` is the instantiated type; `inst` are the explicit type arguments.
  static Term constant(std::string name, std::vector<Type> inst, Type type);
  static Term app(Term fun, Term arg);
  static Term abs(Term bvar, Term body);

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_abs() const { return kind() == Kind::Abs; }
  bool is_const(const char* name) const;

  const std::string& name() const;
  const std::vector<Type>& inst() const;
  // Null for ill-typed applications; use type_of() to get a checked answer.
  const Type& type() const;
  const Term& fun() const;
  const Term& arg() const;
  const Term& bvar() const { return fun(); }
  const Term& body() const { return arg(); }

  // Structural identity (names included). Use alpha_equal for alpha-equivalence.
  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  const void* identity() const { return node_.get(); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Type> inst;
  Type type;
  Term a, b;
};

inline Term::Kind Term::kind() const { return node_->kind; }
inline bool Term::is_const(const char* name) const { return is_const() && node_->name == name; }
inline const std::string& Term::name() const { return node_->name; }
inline const std::vector<Type>& Term::inst() const { return node_->inst; }
inline const Type& Term::type() const { return node_->type; }
inline const Term& Term::fun() const { return node_->a; }
inline const Term& Term::arg() const { return node_->b; }

// Checked type of a term; throws TypeMismatch on a bad application.
Type type_of(const Term& t);

// Head and arguments of an application spine: f a1 ... an.
std::pair<Term, std::vector<Term>> strip_comb(const Term& t);
Term list_mk_comb(Term head, const std::vector<Term>& args);

bool alpha_equal(const Term& a, const Term& b);
// Canonical string equal for exactly the alpha-equivalent terms.
std::string alpha_key(const Term& t);

// Free term variables in order of first occurrence.
std::vector<Term> free_vars(const Term& t);
bool occurs_free(const Term& var, const Term& t);
void collect_type_vars(const Term& t, std::vector<std::string>& out);

// Capture-avoiding substitution of `value` for the free occurrences of `var`.
Term subst(const Term& t, const Term& var, const Term& value);
Term beta_normalize(const Term& t);

// Subterms deduplicated up to alpha-equivalence, in pre-order of first
// occurrence; the term itself comes first.
std::vector<Term> subterms(const Term& t);

// Map every type in a term (variable types, constant instantiations).
Term term_type_subst(const Term& t, const TypeSubst& subst);

// --- logical constants -------------------------------------------------------

Term mk_eq(const Term& lhs, const Term& rhs);
Term mk_binop(const char* op, const Term& lhs, const Term& rhs);
Term mk_not(const Term& p);
Term mk_quant(const char* q, const Term& var, const Term& body);
Term mk_truth(bool value);

// Matches `op l r` for a binary builtin; returns {l, r}.
std::optional<std::pair<Term, Term>> dest_binop(const Term& t, const char* op);
std::optional<Term> dest_not(const Term& t);
// Matches `q (\x. body)`; returns {x, body}.
std::optional<std::pair<Term, Term>> dest_quant(const Term& t, const char* q);
// Strips the leading run of universal quantifiers.
std::pair<std::vector<Term>, Term> strip_forall(const Term& t);
Term list_mk_forall(const std::vector<Term>& vars, Term body);

// --- signatures --------------------------------------------------------------

struct ConstInfo {
  std::vector<std::string> params;  // type variables, order of explicit arguments
  Type type;                        // general type over `params`
};

class Signature {
 public:
  Signature();  // bool, fun and the logical constants

  void add_type(const std::string& name, std::size_t arity);
  void add_const(const std::string& name, ConstInfo info);

  std::optional<std::size_t> type_arity(const std::string& name) const;
  const ConstInfo* find_const(const std::string& name) const;
  bool is_builtin_type(const std::string& name) const;
  bool is_builtin_const(const std::string& name) const;

  // Instantiated constant; throws UnknownSymbol / ArityMismatch.
  Term mk_const(const std::string& name, const std::vector<Type>& inst) const;
  // Validates constructor names and arities.
  void check_type(const Type& ty) const;

  const std::map<std::string, std::size_t>& types() const { return types_; }
  const std::map<std::string, ConstInfo>& consts() const { return consts_; }

 private:
  std::map<std::string, std::size_t> types_;
  std::map<std::string, ConstInfo> consts_;
};

// Principal type of `t`; fails on unknown symbols, wrong instantiation
// arity or ill-typed application, naming the offending subterm.
Type typecheck(const Term& t, const Signature& sig);

// --- conjuncts ---------------------------------------------------------------

enum class Side : std::uint8_t { Left, Right };

struct ConjunctAddress {
  std::vector<Side> path;  // steps through top-level conjunctions
  std::size_t index = 1;   // flat 1-based position, in-order
  friend bool operator==(const ConjunctAddress&, const ConjunctAddress&) = default;
};

struct Conjunct {
  ConjunctAddress address;
  Term term;
};

// Distributes outer universals over conjunctions recursively; each conjunct
// rebinds the universals it uses. Throws NotBoolean.
std::vector<Conjunct> split_conjuncts(const Term& formula);

std::string path_str(const std::vector<Side>& path);

}  // namespace hammer
