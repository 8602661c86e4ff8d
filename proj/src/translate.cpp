#include "hammer/translate.hpp"

#include "hammer/error.hpp"
#include "hammer/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <set>

namespace hammer {

namespace {

bool is_quantifier(const Term& t) { return t.is_const(builtin::kForall) || t.is_const(builtin::kExists); }

void var_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out.insert(t.name()); break;
    case Term::Kind::Const: break;
    case Term::Kind::App:
      var_names(t.fun(), out);
      var_names(t.arg(), out);
      break;
    case Term::Kind::Abs:
      var_names(t.bvar(), out);
      var_names(t.body(), out);
      break;
  }
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  std::string n = base;
  for (std::size_t k = 1; used.count(n); ++k) n = base + std::to_string(k);
  used.insert(n);
  return n;
}

// Generic type of `ty` after `n` applications, or null when the arrows run out.
Type generic_after(const Type& ty, std::size_t n) {
  Type t = ty;
  for (std::size_t i = 0; i < n; ++i) {
    if (!t.is_fun()) return Type();
    t = t.range();
  }
  return t;
}

}  // namespace

// --- lambda lifting ----------------------------------------------------------

Term LambdaLifter::lift(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t;
    case Term::Kind::Abs: return lift_abs(t);
    case Term::Kind::App: {
      if (is_quantifier(t.fun())) {
        const Term& q = t.fun();
        Term body = t.arg();
        if (!body.is_abs()) {
          // Eta-expand so the quantifier binds a variable.
          std::set<std::string> used;
          var_names(body, used);
          Term x = Term::var(fresh_name("x", used), type_of(body).domain());
          body = Term::abs(x, Term::app(body, x));
        }
        return Term::app(q, Term::abs(body.bvar(), lift(body.body())));
      }
      return Term::app(lift(t.fun()), lift(t.arg()));
    }
  }
  return t;
}

Term LambdaLifter::lift_abs(const Term& t) {
  std::vector<Term> bound;
  Term body = t;
  while (body.is_abs()) {
    bound.push_back(body.bvar());
    body = body.body();
  }
  body = lift(body);
  Term lam = body;
  for (std::size_t i = bound.size(); i-- > 0;) lam = Term::abs(bound[i], lam);
  std::vector<Term> captured = free_vars(lam);
  Term closed = lam;
  for (std::size_t i = captured.size(); i-- > 0;) closed = Term::abs(captured[i], closed);

  std::string key = alpha_key(closed);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    std::string name;
    do {
      name = "lam_" + std::to_string(++counter_);
    } while (sig_.find_const(name));
    std::vector<std::string> params;
    collect_type_vars(closed, params);
    sig_.add_const(name, ConstInfo{params, type_of(closed)});
    std::vector<Type> inst;
    for (const auto& p : params) inst.push_back(Type::var(p));
    Term head = sig_.mk_const(name, inst);

    std::vector<Term> all = captured;
    all.insert(all.end(), bound.begin(), bound.end());
    Term eq = mk_eq(list_mk_comb(head, all), body);
    defs_.push_back({name, all.size(), list_mk_forall(all, eq)});
    it = cache_.emplace(key, head).first;
  }
  return list_mk_comb(it->second, captured);
}

// --- boolean arguments -------------------------------------------------------

namespace {

// Rebuilds the formula structure of t, passing every atom to `atom`.
Term map_atoms(const Term& t, const std::function<Term(const Term&)>& atom) {
  if (auto p = dest_not(t)) return mk_not(map_atoms(*p, atom));
  for (const char* op : {builtin::kAnd, builtin::kOr, builtin::kImp})
    if (auto b = dest_binop(t, op)) return mk_binop(op, map_atoms(b->first, atom), map_atoms(b->second, atom));
  if (auto eq = dest_binop(t, builtin::kEq); eq && type_of(eq->first).is_bool())
    return mk_eq(map_atoms(eq->first, atom), map_atoms(eq->second, atom));
  for (const char* q : {builtin::kForall, builtin::kExists})
    if (auto b = dest_quant(t, q)) return mk_quant(q, b->first, map_atoms(b->second, atom));
  return atom(t);
}

class BoolArgRemover {
 public:
  explicit BoolArgRemover(const Term& formula) { var_names(formula, used_); }

  Term formula(const Term& t) {
    return map_atoms(t, [this](const Term& a) { return atom(a); });
  }

 private:
  Term atom(const Term& t) {
    if (t.is_var() || t.is_const()) return t;
    std::vector<std::pair<Term, Term>> pulled;
    auto [head, args] = strip_comb(t);
    for (auto& a : args) a = replace(a, pulled);
    Term out = list_mk_comb(head, args);
    for (std::size_t i = pulled.size(); i-- > 0;) {
      const auto& [b, phi] = pulled[i];
      out = mk_quant(builtin::kExists, b, mk_binop(builtin::kAnd, mk_eq(b, formula(phi)), out));
    }
    return out;
  }

  Term replace(const Term& u, std::vector<std::pair<Term, Term>>& pulled) {
    if (!u.is_var() && type_of(u).is_bool()) {
      Term b = Term::var(fresh_name("b", used_), Type::boolean());
      pulled.emplace_back(b, u);
      return b;
    }
    if (!u.is_app()) return u;
    auto [head, args] = strip_comb(u);
    for (auto& a : args) a = replace(a, pulled);
    return list_mk_comb(head, args);
  }

  std::set<std::string> used_;
};

bool truth_term(const Term& a, const std::set<std::string>& truth_terms) {
  if (a.is_var()) return true;
  Term head = strip_comb(a).first;
  return head.is_const() && truth_terms.count(head.name());
}

void residue(const Term& t, bool formula_pos, const std::set<std::string>& truth_terms,
             std::vector<std::string>& out) {
  if (formula_pos) {
    if (auto p = dest_not(t)) return residue(*p, true, truth_terms, out);
    for (const char* op : {builtin::kAnd, builtin::kOr, builtin::kImp}) {
      if (auto b = dest_binop(t, op)) {
        residue(b->first, true, truth_terms, out);
        residue(b->second, true, truth_terms, out);
        return;
      }
    }
    if (auto eq = dest_binop(t, builtin::kEq)) {
      bool b = type_of(eq->first).is_bool();
      residue(eq->first, b, truth_terms, out);
      residue(eq->second, b, truth_terms, out);
      return;
    }
    for (const char* q : {builtin::kForall, builtin::kExists})
      if (auto b = dest_quant(t, q)) return residue(b->second, true, truth_terms, out);
  }
  if (t.is_abs()) {
    out.push_back("abstraction " + print_term(t));
    return;
  }
  auto [head, args] = strip_comb(t);
  if (head.is_abs()) out.push_back("abstraction " + print_term(head));
  if (is_quantifier(head)) out.push_back("quantifier in term position");
  for (const auto& a : args) {
    if (type_of(a).is_bool() && !truth_term(a, truth_terms)) out.push_back("boolean argument " + print_term(a));
    residue(a, false, truth_terms, out);
  }
}

}  // namespace

Term remove_bool_args(const Term& formula) { return BoolArgRemover(formula).formula(formula); }

std::vector<std::string> first_order_residue(const Term& formula, const std::set<std::string>& truth_terms) {
  std::vector<std::string> out;
  residue(formula, true, truth_terms, out);
  return out;
}

Term BoolLifter::lift(const Term& formula) {
  return map_atoms(formula, [this](const Term& t) { return atom(t); });
}

Term BoolLifter::atom(const Term& t) {
  if (t.is_var() || t.is_const()) return t;
  auto [head, args] = strip_comb(t);
  for (auto& a : args) a = replace(a);
  return list_mk_comb(head, args);
}

Term BoolLifter::replace(const Term& u) {
  if (u.is_var()) return u;
  if (!type_of(u).is_bool()) {
    if (!u.is_app()) return u;
    auto [head, args] = strip_comb(u);
    for (auto& a : args) a = replace(a);
    return list_mk_comb(head, args);
  }
  std::vector<Term> captured = free_vars(u);
  Term closed = u;
  for (std::size_t i = captured.size(); i-- > 0;) closed = Term::abs(captured[i], closed);
  std::string key = alpha_key(closed);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    std::string name;
    do {
      name = "prop_" + std::to_string(++counter_);
    } while (sig_.find_const(name));
    std::vector<std::string> params;
    collect_type_vars(closed, params);
    sig_.add_const(name, ConstInfo{params, type_of(closed)});
    std::vector<Type> inst;
    for (const auto& p : params) inst.push_back(Type::var(p));
    Term head = sig_.mk_const(name, inst);
    defs_.push_back({name, captured.size(), list_mk_forall(captured, mk_eq(list_mk_comb(head, captured), u))});
    it = cache_.emplace(key, head).first;
  }
  return list_mk_comb(it->second, captured);
}

// --- names -------------------------------------------------------------------

std::string mangle_symbol(std::string_view name) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(name[i]);
    if (std::isalnum(c) || c == '_') {
      out += i == 0 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

namespace {

std::string fof_var_base(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "X" + out;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

FofTerm flatten_with(const Type& ty, const std::function<std::string(const std::string&)>& ctor,
                     const std::function<std::string(const std::string&)>& var) {
  if (ty.is_var()) return FofTerm::var(var(ty.name()));
  if (ty.is_bool()) return FofTerm::fn("bool1");
  std::vector<FofTerm> args;
  for (const auto& a : ty.args()) args.push_back(flatten_with(a, ctor, var));
  return FofTerm::fn(ty.is_fun() ? "fn" : ctor(ty.name()), std::move(args));
}

const std::map<std::string, std::string>& builtin_words() {
  static const std::map<std::string, std::string> w = {
      {builtin::kEq, "equal"},     {builtin::kAnd, "and"},       {builtin::kOr, "or"},
      {builtin::kImp, "implies"},  {builtin::kNot, "not"},       {builtin::kForall, "forall"},
      {builtin::kExists, "exists"}, {builtin::kTrue, "true"},    {builtin::kFalse, "false"}};
  return w;
}

}  // namespace

FofTerm flatten_type(const Type& ty) {
  return flatten_with(ty, [](const std::string& n) { return mangle_symbol(n); },
                      [](const std::string& n) { return fof_var_base(n); });
}

// --- encoding ----------------------------------------------------------------

namespace {

// Injective name allocation: each key gets the first free variant of its base.
class NameTable {
 public:
  explicit NameTable(std::set<std::string> taken = {}) : taken_(std::move(taken)) {}

  std::string get(const std::string& key, const std::string& base, const char* sep = "_") {
    auto it = names_.find(key);
    if (it != names_.end()) return it->second;
    std::string n = base;
    for (std::size_t k = 1; taken_.count(n); ++k) n = base + sep + std::to_string(k);
    taken_.insert(n);
    names_[key] = n;
    return n;
  }

 private:
  std::set<std::string> taken_;
  std::map<std::string, std::string> names_;
};

class Translator {
 public:
  Translator(const Signature& sig, const TranslateOptions& opt)
      : sig_(sig), opt_(opt), lifter_(sig_), props_(sig_), symbols_(encoding_symbols()) {}

  FofFormula formula(const Term& t) {
    Term lifted = lifter_.lift(beta_normalize(t));
    for (const auto& d : lifter_.defs()) zero_arity_.insert(d.symbol);
    Term clean = opt_.bool_args == BoolArgMode::Lifted ? props_.lift(lifted) : remove_bool_args(lifted);
    for (const auto& d : props_.defs()) term_only_.insert(d.symbol);
    vars_ = NameTable();
    FofFormula f = encf(clean);
    auto open = free_vars(f);
    return FofFormula::quant(FofFormula::Kind::Forall, std::move(open), std::move(f));
  }

  // Lifted definitions not yet emitted: abstractions, then boolean arguments.
  std::vector<LiftedDef> take_defs() {
    std::vector<LiftedDef> out(lifter_.defs().begin() + static_cast<long>(defs_emitted_), lifter_.defs().end());
    out.insert(out.end(), props_.defs().begin() + static_cast<long>(props_emitted_), props_.defs().end());
    defs_emitted_ = lifter_.defs().size();
    props_emitted_ = props_.defs().size();
    return out;
  }

  std::optional<std::string> take_proxy() {
    if (proxy_queue_.empty()) return std::nullopt;
    std::string c = proxy_queue_.front();
    proxy_queue_.pop_front();
    return c;
  }

  // HOL equation defining the arity-0 proxy of `c`.
  Term proxy_axiom(const std::string& c) {
    const ConstInfo* info = sig_.find_const(c);
    std::vector<Type> inst;
    for (const auto& p : info->params) inst.push_back(Type::var(p));
    std::string proxy = proxy_const(c);
    Term lhs = sig_.mk_const(proxy, inst), rhs = sig_.mk_const(c, inst);
    std::vector<Term> xs;
    std::set<std::string> used;
    Type ty = info->type;
    for (std::size_t i = 0, n = fo_arity(c); i < n; ++i) {
      xs.push_back(Term::var(fresh_name("x", used), ty.domain()));
      ty = ty.range();
    }
    return list_mk_forall(xs, mk_eq(list_mk_comb(lhs, xs), list_mk_comb(rhs, xs)));
  }

  const std::map<std::string, std::string>& symbol_names() const { return symbol_names_; }
  std::vector<LiftedDef> all_defs() const {
    std::vector<LiftedDef> out = lifter_.defs();
    out.insert(out.end(), props_.defs().begin(), props_.defs().end());
    return out;
  }

 private:
  std::size_t fo_arity(const std::string& c) const {
    if (zero_arity_.count(c)) return 0;
    const ConstInfo* info = sig_.find_const(c);
    if (!info) throw Error(Errc::UnknownSymbol, "unknown constant " + c);
    return arrow_count(info->type);
  }

  std::string proxy_const(const std::string& c) {
    std::string name = c + "@proxy";
    if (!sig_.find_const(name)) {
      sig_.add_const(name, *sig_.find_const(c));
      zero_arity_.insert(name);
      proxy_of_[name] = c;
    }
    return name;
  }

  std::string const_symbol(const std::string& c) {
    if (auto p = proxy_of_.find(c); p != proxy_of_.end()) {
      std::string s = symbols_.get("p:" + p->second, const_symbol(p->second) + "_p");
      symbol_names_[s] = p->second;
      return s;
    }
    auto w = builtin_words().find(c);
    std::string s = symbols_.get("c:" + c, w != builtin_words().end() ? w->second : mangle_symbol(c));
    symbol_names_[s] = c;
    return s;
  }

  FofTerm flatten(const Type& ty) {
    return flatten_with(
        ty,
        [this](const std::string& n) {
          std::string s = symbols_.get("t:" + n, mangle_symbol(n));
          symbol_names_[s] = n;
          return s;
        },
        [this](const std::string& n) { return vars_.get("ty:" + n, fof_var_base(n), ""); });
  }

  std::string var_name(const Term& v) { return vars_.get("tm:" + v.name() + ":" + v.type().str(), fof_var_base(v.name()), ""); }

  FofTerm tag(const Type& ty, FofTerm t) { return FofTerm::fn("s", {flatten(ty), std::move(t)}); }

  FofTerm ap(FofTerm f, FofTerm x) { return FofTerm::fn("ap", {std::move(f), std::move(x)}); }

  bool tag_all() const { return opt_.tags == TagMode::All; }

  FofTerm enc(const Term& t) {
    if (t.is_var()) return tag(t.type(), FofTerm::var(var_name(t)));
    auto [head, args] = strip_comb(t);
    if (head.is_abs()) throw Error(Errc::TypeMismatch, "abstraction left after lifting");
    if (head.is_var()) {
      FofTerm r = enc(head);
      Term partial = head;
      for (const auto& a : args) {
        partial = Term::app(partial, a);
        r = ap(std::move(r), enc(a));
        if (tag_all()) r = tag(partial.type(), std::move(r));
      }
      return r;
    }
    // Constants are saturated at their first-order arity when possible.
    const std::string& c = head.name();
    std::size_t n = fo_arity(c);
    const Type& generic = sig_.find_const(c)->type;
    auto bare_var = [&](std::size_t i) {
      Type g = generic_after(generic, i);
      return !g || g.is_var();
    };
    FofTerm r;
    Term partial = head;
    std::size_t i = 0;
    if (args.size() >= n) {
      std::vector<FofTerm> first;
      for (; i < n; ++i) {
        first.push_back(enc(args[i]));
        partial = Term::app(partial, args[i]);
      }
      r = FofTerm::fn(const_symbol(c), std::move(first));
    } else {
      std::string proxy = proxy_const(c);
      if (emitted_proxies_.insert(c).second) proxy_queue_.push_back(c);
      r = FofTerm::fn(const_symbol(proxy));
    }
    if (tag_all() || bare_var(i)) r = tag(partial.type(), std::move(r));
    for (; i < args.size(); ++i) {
      partial = Term::app(partial, args[i]);
      r = ap(std::move(r), enc(args[i]));
      if (tag_all() || bare_var(i + 1)) r = tag(partial.type(), std::move(r));
    }
    return r;
  }

  FofFormula encf(const Term& t) {
    using K = FofFormula::Kind;
    if (t.is_const(builtin::kTrue)) return FofFormula::truth(true);
    if (t.is_const(builtin::kFalse)) return FofFormula::truth(false);
    if (auto p = dest_not(t)) return FofFormula::negate(encf(*p));
    if (auto b = dest_binop(t, builtin::kAnd)) return FofFormula::binary(K::And, encf(b->first), encf(b->second));
    if (auto b = dest_binop(t, builtin::kOr)) return FofFormula::binary(K::Or, encf(b->first), encf(b->second));
    if (auto b = dest_binop(t, builtin::kImp)) return FofFormula::binary(K::Imp, encf(b->first), encf(b->second));
    if (auto eq = dest_binop(t, builtin::kEq)) {
      if (type_of(eq->first).is_bool()) return FofFormula::binary(K::Iff, encf(eq->first), encf(eq->second));
      return FofFormula::eq(enc(eq->first), enc(eq->second));
    }
    for (const char* q : {builtin::kForall, builtin::kExists}) {
      if (auto b = dest_quant(t, q)) {
        std::string v = var_name(b->first);
        return FofFormula::quant(q == builtin::kForall ? K::Forall : K::Exists, {v}, encf(b->second));
      }
    }
    auto [head, args] = strip_comb(t);
    if (head.is_const() && !zero_arity_.count(head.name()) && !term_only_.count(head.name()) &&
        !sig_.is_builtin_const(head.name())) {
      if (args.size() == fo_arity(head.name())) {
        Type g = generic_after(sig_.find_const(head.name())->type, args.size());
        if (g && g.is_bool()) {
          std::vector<FofTerm> xs;
          for (const auto& a : args) xs.push_back(enc(a));
          return FofFormula::pred(const_symbol(head.name()), std::move(xs));
        }
      }
    }
    return FofFormula::pred("bool", {enc(t)});
  }

  Signature sig_;
  TranslateOptions opt_;
  LambdaLifter lifter_;
  BoolLifter props_;
  NameTable symbols_;
  NameTable vars_;
  std::set<std::string> zero_arity_;
  std::set<std::string> term_only_;  // boolean-valued, but always terms
  std::map<std::string, std::string> proxy_of_;
  std::set<std::string> emitted_proxies_;
  std::deque<std::string> proxy_queue_;
  std::map<std::string, std::string> symbol_names_;
  std::size_t defs_emitted_ = 0;
  std::size_t props_emitted_ = 0;
};

}  // namespace

std::vector<std::string> TranslatedProblem::user_core(const std::vector<std::string>& axioms) const {
  std::vector<std::string> out;
  for (const auto& a : axioms) {
    auto it = origins.find(a);
    if (it != origins.end() && it->second.kind == AxiomOrigin::Kind::Premise) out.push_back(it->second.source);
  }
  return out;
}

FofProblem TranslatedProblem::restrict_to(const std::vector<std::string>& premises) const {
  std::set<std::string> keep(premises.begin(), premises.end());
  FofProblem p;
  for (const auto& f : problem.formulas) {
    auto it = origins.find(f.name);
    if (it != origins.end() && it->second.kind == AxiomOrigin::Kind::Premise && !keep.count(it->second.source))
      continue;
    p.formulas.push_back(f);
  }
  return p;
}

TranslatedProblem translate_problem(const Signature& sig, const std::vector<NamedTerm>& premises,
                                    const std::optional<Term>& conjecture, const TranslateOptions& options) {
  Translator tr(sig, options);
  TranslatedProblem out;
  NameTable names({"goal"});
  auto add = [&](const std::string& base, AxiomOrigin origin, FofFormula f) {
    std::string name = names.get(std::to_string(out.problem.formulas.size()), base);
    out.origins[name] = std::move(origin);
    out.problem.formulas.push_back({name, "axiom", std::move(f)});
  };

  for (const auto& p : premises)
    add(mangle_symbol(p.name), {AxiomOrigin::Kind::Premise, p.name}, tr.formula(p.term));
  std::optional<FofFormula> goal;
  if (conjecture) goal = tr.formula(*conjecture);

  // Definitions and proxies may introduce further ones; drain both queues.
  for (;;) {
    auto defs = tr.take_defs();
    for (const auto& d : defs) add("def_" + mangle_symbol(d.symbol), {AxiomOrigin::Kind::Lifted, d.symbol}, tr.formula(d.axiom));
    auto proxy = tr.take_proxy();
    if (proxy) add("proxy_" + mangle_symbol(*proxy), {AxiomOrigin::Kind::Proxy, *proxy}, tr.formula(tr.proxy_axiom(*proxy)));
    if (defs.empty() && !proxy) break;
  }
  if (options.tag_helper) {
    FofFormula h = FofFormula::quant(
        FofFormula::Kind::Forall, {"T", "X"},
        FofFormula::eq(FofTerm::fn("s", {FofTerm::var("T"), FofTerm::var("X")}), FofTerm::var("X")));
    add("tag_helper", {AxiomOrigin::Kind::Helper, "s"}, std::move(h));
  }
  if (options.bool_ext) {
    // Extensionality for tagged booleans; sound because s(bool1, _) only
    // ever denotes one of the two truth values.
    FofProblem probe = out.problem;
    if (goal) probe.formulas.push_back({"goal", "conjecture", *goal});
    if (scan_symbols(probe).symbols.count("bool1")) {
      auto tb = [](const char* v) { return FofTerm::fn("s", {FofTerm::fn("bool1"), FofTerm::var(v)}); };
      FofFormula iff = FofFormula::binary(FofFormula::Kind::Iff, FofFormula::pred("bool", {tb("X")}),
                                          FofFormula::pred("bool", {tb("Y")}));
      FofFormula h = FofFormula::quant(FofFormula::Kind::Forall, {"X", "Y"},
                                       FofFormula::binary(FofFormula::Kind::Imp, std::move(iff),
                                                          FofFormula::eq(tb("X"), tb("Y"))));
      add("bool_ext", {AxiomOrigin::Kind::Helper, "bool"}, std::move(h));
    }
  }
  if (goal) out.problem.formulas.push_back({"goal", "conjecture", std::move(*goal)});
  out.symbols = tr.symbol_names();
  out.lifted = tr.all_defs();
  return out;
}

}  // namespace hammer
