#include "hammer/logic.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "hammer/syntax.hpp"

namespace hammer {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::NotBoolean: return "NotBoolean";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownTheorem: return "UnknownTheorem";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::BranchMissing: return "BranchMissing";
    case Errc::SpawnError: return "SpawnError";
    case Errc::NoProofFound: return "NoProofFound";
    case Errc::Usage: return "Usage";
    case Errc::Io: return "Io";
  }
  return "Error";
}

// --- Type --------------------------------------------------------------------

Type Type::var(std::string name) {
  return Type(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

Type Type::app(std::string ctor, std::vector<Type> args) {
  return Type(std::make_shared<const Node>(Node{Kind::App, std::move(ctor), std::move(args)}));
}

Type Type::fun(Type domain, Type range) {
  return app(builtin::kFun, {std::move(domain), std::move(range)});
}

Type Type::boolean() {
  static const Type b = app(builtin::kBool);
  return b;
}

bool Type::is_fun() const {
  return node_->kind == Kind::App && node_->name == builtin::kFun && node_->args.size() == 2;
}

bool Type::is_bool() const {
  return node_->kind == Kind::App && node_->name == builtin::kBool && node_->args.empty();
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->kind == b.node_->kind && a.node_->name == b.node_->name &&
         a.node_->args == b.node_->args;
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
  if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
  return a.node_->args <=> b.node_->args;
}

std::string Type::str() const { return node_ ? print_type(*this) : "<null>"; }

Type type_subst(const Type& ty, const TypeSubst& subst) {
  if (subst.empty()) return ty;
  if (ty.is_var()) {
    auto it = subst.find(ty.name());
    return it == subst.end() ? ty : it->second;
  }
  std::vector<Type> args;
  args.reserve(ty.args().size());
  bool changed = false;
  for (const auto& a : ty.args()) {
    args.push_back(type_subst(a, subst));
    changed = changed || !(args.back() == a);
  }
  return changed ? Type::app(ty.name(), std::move(args)) : ty;
}

void collect_type_vars(const Type& ty, std::vector<std::string>& out) {
  if (ty.is_var()) {
    if (std::find(out.begin(), out.end(), ty.name()) == out.end()) out.push_back(ty.name());
    return;
  }
  for (const auto& a : ty.args()) collect_type_vars(a, out);
}

void collect_type_ctors(const Type& ty, std::vector<std::string>& out) {
  if (ty.is_var()) return;
  if (std::find(out.begin(), out.end(), ty.name()) == out.end()) out.push_back(ty.name());
  for (const auto& a : ty.args()) collect_type_ctors(a, out);
}

std::size_t arrow_count(const Type& ty) {
  std::size_t n = 0;
  for (const Type* t = &ty; t->is_fun(); t = &t->range()) ++n;
  return n;
}

Type final_range(const Type& ty) {
  const Type* t = &ty;
  while (t->is_fun()) t = &t->range();
  return *t;
}

// --- Term --------------------------------------------------------------------

Term Term::var(std::string name, Type type) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, std::move(type), {}, {}}));
}

Term Term::constant(std::string name, std::vector<Type> inst, Type type) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Const, std::move(name), std::move(inst), std::move(type), {}, {}}));
}

Term Term::app(Term fun, Term arg) {
  Type ty;
  const Type& ft = fun.type();
  if (ft && ft.is_fun() && arg.type() && ft.domain() == arg.type()) ty = ft.range();
  return Term(std::make_shared<const Node>(Node{Kind::App, {}, {}, std::move(ty), std::move(fun), std::move(arg)}));
}

Term Term::abs(Term bvar, Term body) {
  Type ty;
  if (body.type()) ty = Type::fun(bvar.type(), body.type());
  return Term(std::make_shared<const Node>(Node{Kind::Abs, {}, {}, std::move(ty), std::move(bvar), std::move(body)}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Term::Kind::Var: return x.name == y.name && x.type == y.type;
    case Term::Kind::Const: return x.name == y.name && x.inst == y.inst && x.type == y.type;
    case Term::Kind::App:
    case Term::Kind::Abs: return x.a == y.a && x.b == y.b;
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  switch (x.kind) {
    case Term::Kind::Var:
      if (auto c = x.name <=> y.name; c != 0) return c;
      return x.type <=> y.type;
    case Term::Kind::Const:
      if (auto c = x.name <=> y.name; c != 0) return c;
      if (auto c = x.inst <=> y.inst; c != 0) return c;
      return x.type <=> y.type;
    case Term::Kind::App:
    case Term::Kind::Abs:
      if (auto c = x.a <=> y.a; c != 0) return c;
      return x.b <=> y.b;
  }
  return std::strong_ordering::equal;
}

Type type_of(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t.type();
    case Term::Kind::Abs: return Type::fun(t.bvar().type(), type_of(t.body()));
    case Term::Kind::App: {
      Type f = type_of(t.fun());
      if (!f.is_fun()) throw Error(Errc::TypeMismatch, "not a function in " + print_term(t));
      Type a = type_of(t.arg());
      if (!(f.domain() == a)) throw Error(Errc::TypeMismatch, "argument type mismatch in " + print_term(t));
      return f.range();
    }
  }
  return {};
}

std::pair<Term, std::vector<Term>> strip_comb(const Term& t) {
  std::vector<Term> args;
  const Term* cur = &t;
  while (cur->is_app()) {
    args.push_back(cur->arg());
    cur = &cur->fun();
  }
  std::reverse(args.begin(), args.end());
  return {*cur, std::move(args)};
}

Term list_mk_comb(Term head, const std::vector<Term>& args) {
  for (const auto& a : args) head = Term::app(std::move(head), a);
  return head;
}

namespace {

bool alpha_eq_rec(const Term& a, const Term& b, std::vector<const Term*>& env_a,
                  std::vector<const Term*>& env_b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      auto find = [](const Term& v, const std::vector<const Term*>& env) -> long {
        for (std::size_t i = env.size(); i-- > 0;)
          if (*env[i] == v) return static_cast<long>(env.size() - 1 - i);
        return -1;
      };
      long ia = find(a, env_a);
      long ib = find(b, env_b);
      if (ia != ib) return false;
      return ia >= 0 || a == b;
    }
    case Term::Kind::Const: return a == b;
    case Term::Kind::App:
      return alpha_eq_rec(a.fun(), b.fun(), env_a, env_b) && alpha_eq_rec(a.arg(), b.arg(), env_a, env_b);
    case Term::Kind::Abs: {
      if (!(a.bvar().type() == b.bvar().type())) return false;
      env_a.push_back(&a.bvar());
      env_b.push_back(&b.bvar());
      bool ok = alpha_eq_rec(a.body(), b.body(), env_a, env_b);
      env_a.pop_back();
      env_b.pop_back();
      return ok;
    }
  }
  return false;
}

void alpha_key_rec(const Term& t, std::vector<const Term*>& env, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      for (std::size_t i = env.size(); i-- > 0;) {
        if (*env[i] == t) {
          out += '#';
          out += std::to_string(env.size() - 1 - i);
          return;
        }
      }
      out += 'v';
      out += t.name();
      out += ':';
      out += t.type().str();
      out += ';';
      return;
    }
    case Term::Kind::Const:
      out += 'c';
      out += t.name();
      for (const auto& ty : t.inst()) {
        out += '[';
        out += ty.str();
        out += ']';
      }
      out += ';';
      return;
    case Term::Kind::App:
      out += '(';
      alpha_key_rec(t.fun(), env, out);
      out += ' ';
      alpha_key_rec(t.arg(), env, out);
      out += ')';
      return;
    case Term::Kind::Abs:
      out += "(\\";
      out += t.bvar().type().str();
      out += '.';
      env.push_back(&t.bvar());
      alpha_key_rec(t.body(), env, out);
      env.pop_back();
      out += ')';
      return;
  }
}

void free_vars_rec(const Term& t, std::vector<const Term*>& bound, std::vector<Term>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      for (const Term* b : bound)
        if (*b == t) return;
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      return;
    case Term::Kind::Const: return;
    case Term::Kind::App:
      free_vars_rec(t.fun(), bound, out);
      free_vars_rec(t.arg(), bound, out);
      return;
    case Term::Kind::Abs:
      bound.push_back(&t.bvar());
      free_vars_rec(t.body(), bound, out);
      bound.pop_back();
      return;
  }
}

void all_var_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out.insert(t.name()); return;
    case Term::Kind::Const: return;
    case Term::Kind::App:
      all_var_names(t.fun(), out);
      all_var_names(t.arg(), out);
      return;
    case Term::Kind::Abs:
      out.insert(t.bvar().name());
      all_var_names(t.body(), out);
      return;
  }
}

Term variant(const Term& v, const std::set<std::string>& avoid) {
  std::string name = v.name();
  while (avoid.count(name)) name += '\'';
  return Term::var(name, v.type());
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  std::vector<const Term*> ea, eb;
  return alpha_eq_rec(a, b, ea, eb);
}

std::string alpha_key(const Term& t) {
  std::vector<const Term*> env;
  std::string out;
  alpha_key_rec(t, env, out);
  return out;
}

std::vector<Term> free_vars(const Term& t) {
  std::vector<const Term*> bound;
  std::vector<Term> out;
  free_vars_rec(t, bound, out);
  return out;
}

bool occurs_free(const Term& var, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return t == var;
    case Term::Kind::Const: return false;
    case Term::Kind::App: return occurs_free(var, t.fun()) || occurs_free(var, t.arg());
    case Term::Kind::Abs: return !(t.bvar() == var) && occurs_free(var, t.body());
  }
  return false;
}

void collect_type_vars(const Term& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: collect_type_vars(t.type(), out); return;
    case Term::Kind::Const:
      if (t.type()) collect_type_vars(t.type(), out);
      for (const auto& ty : t.inst()) collect_type_vars(ty, out);
      return;
    case Term::Kind::App:
      collect_type_vars(t.fun(), out);
      collect_type_vars(t.arg(), out);
      return;
    case Term::Kind::Abs:
      collect_type_vars(t.bvar(), out);
      collect_type_vars(t.body(), out);
      return;
  }
}

Term subst(const Term& t, const Term& var, const Term& value) {
  switch (t.kind()) {
    case Term::Kind::Var: return t == var ? value : t;
    case Term::Kind::Const: return t;
    case Term::Kind::App: {
      Term f = subst(t.fun(), var, value);
      Term a = subst(t.arg(), var, value);
      if (f.identity() == t.fun().identity() && a.identity() == t.arg().identity()) return t;
      return Term::app(std::move(f), std::move(a));
    }
    case Term::Kind::Abs: {
      const Term& x = t.bvar();
      if (x == var || !occurs_free(var, t.body())) return t;
      if (occurs_free(x, value)) {
        std::set<std::string> avoid;
        for (const auto& v : free_vars(value)) avoid.insert(v.name());
        all_var_names(t.body(), avoid);
        Term fresh = variant(x, avoid);
        Term body = subst(t.body(), x, fresh);
        return Term::abs(fresh, subst(body, var, value));
      }
      return Term::abs(x, subst(t.body(), var, value));
    }
  }
  return t;
}

Term beta_normalize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t;
    case Term::Kind::Abs: {
      Term body = beta_normalize(t.body());
      return body.identity() == t.body().identity() ? t : Term::abs(t.bvar(), std::move(body));
    }
    case Term::Kind::App: {
      Term f = beta_normalize(t.fun());
      if (f.is_abs()) return beta_normalize(subst(f.body(), f.bvar(), t.arg()));
      Term a = beta_normalize(t.arg());
      if (f.identity() == t.fun().identity() && a.identity() == t.arg().identity()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

std::vector<Term> subterms(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<std::string> seen;
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (seen.insert(alpha_key(*cur)).second) out.push_back(*cur);
    if (cur->is_app()) {
      stack.push_back(&cur->arg());
      stack.push_back(&cur->fun());
    } else if (cur->is_abs()) {
      stack.push_back(&cur->body());
      stack.push_back(&cur->bvar());
    }
  }
  return out;
}

Term term_type_subst(const Term& t, const TypeSubst& s) {
  if (s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::Var: return Term::var(t.name(), type_subst(t.type(), s));
    case Term::Kind::Const: {
      std::vector<Type> inst;
      for (const auto& ty : t.inst()) inst.push_back(type_subst(ty, s));
      return Term::constant(t.name(), std::move(inst), type_subst(t.type(), s));
    }
    case Term::Kind::App: return Term::app(term_type_subst(t.fun(), s), term_type_subst(t.arg(), s));
    case Term::Kind::Abs: return Term::abs(term_type_subst(t.bvar(), s), term_type_subst(t.body(), s));
  }
  return t;
}

// --- logical constants -------------------------------------------------------

Term mk_eq(const Term& lhs, const Term& rhs) {
  Type ty = type_of(lhs);
  Term eq = Term::constant(builtin::kEq, {ty}, Type::fun(ty, Type::fun(ty, Type::boolean())));
  return Term::app(Term::app(eq, lhs), rhs);
}

Term mk_binop(const char* op, const Term& lhs, const Term& rhs) {
  if (std::string_view(op) == builtin::kEq) return mk_eq(lhs, rhs);
  Type b = Type::boolean();
  Term c = Term::constant(op, {}, Type::fun(b, Type::fun(b, b)));
  return Term::app(Term::app(c, lhs), rhs);
}

Term mk_not(const Term& p) {
  Type b = Type::boolean();
  return Term::app(Term::constant(builtin::kNot, {}, Type::fun(b, b)), p);
}

Term mk_quant(const char* q, const Term& var, const Term& body) {
  Type ty = var.type();
  Type pred = Type::fun(ty, Type::boolean());
  Term c = Term::constant(q, {ty}, Type::fun(pred, Type::boolean()));
  return Term::app(c, Term::abs(var, body));
}

Term mk_truth(bool value) {
  return Term::constant(value ? builtin::kTrue : builtin::kFalse, {}, Type::boolean());
}

std::optional<std::pair<Term, Term>> dest_binop(const Term& t, const char* op) {
  if (!t.is_app() || !t.fun().is_app() || !t.fun().fun().is_const(op)) return std::nullopt;
  return std::make_pair(t.fun().arg(), t.arg());
}

std::optional<Term> dest_not(const Term& t) {
  if (t.is_app() && t.fun().is_const(builtin::kNot)) return t.arg();
  return std::nullopt;
}

std::optional<std::pair<Term, Term>> dest_quant(const Term& t, const char* q) {
  if (t.is_app() && t.fun().is_const(q) && t.arg().is_abs()) return std::make_pair(t.arg().bvar(), t.arg().body());
  return std::nullopt;
}

std::pair<std::vector<Term>, Term> strip_forall(const Term& t) {
  std::vector<Term> vars;
  Term cur = t;
  while (auto q = dest_quant(cur, builtin::kForall)) {
    vars.push_back(q->first);
    cur = q->second;
  }
  return {std::move(vars), cur};
}

Term list_mk_forall(const std::vector<Term>& vars, Term body) {
  for (std::size_t i = vars.size(); i-- > 0;) body = mk_quant(builtin::kForall, vars[i], body);
  return body;
}

// --- Signature ---------------------------------------------------------------

Signature::Signature() {
  types_[builtin::kBool] = 0;
  types_[builtin::kFun] = 2;
  Type b = Type::boolean();
  Type a = Type::var("A");
  consts_[builtin::kEq] = {{"A"}, Type::fun(a, Type::fun(a, b))};
  for (const char* op : {builtin::kAnd, builtin::kOr, builtin::kImp})
    consts_[op] = {{}, Type::fun(b, Type::fun(b, b))};
  consts_[builtin::kNot] = {{}, Type::fun(b, b)};
  for (const char* q : {builtin::kForall, builtin::kExists})
    consts_[q] = {{"A"}, Type::fun(Type::fun(a, b), b)};
  consts_[builtin::kTrue] = {{}, b};
  consts_[builtin::kFalse] = {{}, b};
}

void Signature::add_type(const std::string& name, std::size_t arity) { types_[name] = arity; }

void Signature::add_const(const std::string& name, ConstInfo info) { consts_[name] = std::move(info); }

std::optional<std::size_t> Signature::type_arity(const std::string& name) const {
  auto it = types_.find(name);
  if (it == types_.end()) return std::nullopt;
  return it->second;
}

const ConstInfo* Signature::find_const(const std::string& name) const {
  auto it = consts_.find(name);
  return it == consts_.end() ? nullptr : &it->second;
}

bool Signature::is_builtin_type(const std::string& name) const {
  return name == builtin::kBool || name == builtin::kFun;
}

bool Signature::is_builtin_const(const std::string& name) const {
  static const std::set<std::string> names = {builtin::kEq,     builtin::kAnd,    builtin::kOr,
                                              builtin::kImp,    builtin::kNot,    builtin::kForall,
                                              builtin::kExists, builtin::kTrue,   builtin::kFalse};
  return names.count(name) > 0;
}

Term Signature::mk_const(const std::string& name, const std::vector<Type>& inst) const {
  const ConstInfo* info = find_const(name);
  if (!info) throw Error(Errc::UnknownSymbol, "unknown constant " + name);
  if (info->params.size() != inst.size())
    throw Error(Errc::ArityMismatch, "constant " + name + " expects " + std::to_string(info->params.size()) +
                                         " type arguments, got " + std::to_string(inst.size()));
  TypeSubst s;
  for (std::size_t i = 0; i < inst.size(); ++i) s[info->params[i]] = inst[i];
  return Term::constant(name, inst, type_subst(info->type, s));
}

void Signature::check_type(const Type& ty) const {
  if (ty.is_var()) return;
  auto arity = type_arity(ty.name());
  if (!arity) throw Error(Errc::UnknownSymbol, "unknown type constructor " + ty.name());
  if (*arity != ty.args().size())
    throw Error(Errc::ArityMismatch, "type constructor " + ty.name() + " expects " + std::to_string(*arity) +
                                         " arguments in " + ty.str());
  for (const auto& a : ty.args()) check_type(a);
}

Type typecheck(const Term& t, const Signature& sig) {
  switch (t.kind()) {
    case Term::Kind::Var:
      sig.check_type(t.type());
      return t.type();
    case Term::Kind::Const: {
      const ConstInfo* info = sig.find_const(t.name());
      if (!info) throw Error(Errc::UnknownSymbol, "unknown constant " + t.name());
      if (info->params.size() != t.inst().size())
        throw Error(Errc::ArityMismatch, "wrong number of type arguments in " + print_term(t));
      TypeSubst s;
      for (std::size_t i = 0; i < t.inst().size(); ++i) {
        sig.check_type(t.inst()[i]);
        s[info->params[i]] = t.inst()[i];
      }
      Type expected = type_subst(info->type, s);
      if (t.type() && !(t.type() == expected))
        throw Error(Errc::TypeMismatch, "constant " + t.name() + " annotated with " + t.type().str() +
                                            ", signature gives " + expected.str());
      return expected;
    }
    case Term::Kind::App: {
      Type f = typecheck(t.fun(), sig);
      Type a = typecheck(t.arg(), sig);
      if (!f.is_fun())
        throw Error(Errc::TypeMismatch, "applying non-function " + print_term(t.fun()) + " in " + print_term(t));
      if (!(f.domain() == a))
        throw Error(Errc::TypeMismatch, "in " + print_term(t) + ": " + print_term(t.fun()) + " expects " +
                                            f.domain().str() + ", got " + a.str());
      return f.range();
    }
    case Term::Kind::Abs: {
      sig.check_type(t.bvar().type());
      return Type::fun(t.bvar().type(), typecheck(t.body(), sig));
    }
  }
  return {};
}

// --- conjuncts ---------------------------------------------------------------

namespace {

Term close_over(const std::vector<Term>& vars, const Term& body) {
  std::vector<Term> used;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    bool shadowed = std::find(vars.begin() + static_cast<long>(i) + 1, vars.end(), vars[i]) != vars.end();
    if (!shadowed && occurs_free(vars[i], body)) used.push_back(vars[i]);
  }
  return list_mk_forall(used, body);
}

void split_rec(const Term& t, std::vector<Side>& path, std::vector<Conjunct>& out) {
  auto [vars, body] = strip_forall(t);
  if (auto c = dest_binop(body, builtin::kAnd)) {
    path.push_back(Side::Left);
    split_rec(close_over(vars, c->first), path, out);
    path.back() = Side::Right;
    split_rec(close_over(vars, c->second), path, out);
    path.pop_back();
    return;
  }
  out.push_back({{path, out.size() + 1}, t});
}

}  // namespace

std::vector<Conjunct> split_conjuncts(const Term& formula) {
  Type ty = type_of(formula);
  if (!ty.is_bool()) throw Error(Errc::NotBoolean, "cannot split non-boolean " + print_term(formula));
  std::vector<Conjunct> out;
  std::vector<Side> path;
  split_rec(formula, path, out);
  return out;
}

std::string path_str(const std::vector<Side>& path) {
  std::string s;
  for (Side d : path) s += d == Side::Left ? 'L' : 'R';
  return s;
}

}  // namespace hammer
