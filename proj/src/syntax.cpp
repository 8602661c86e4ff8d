#include "hammer/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace hammer {

namespace {

bool name_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return name_start(c) || c == '~' || c == '/' || c == '.' || c == '\''; }

}  // namespace

bool is_bare_name(std::string_view name) {
  if (name.empty() || !name_start(name[0])) return false;
  // A trailing '.' would merge with the entry terminator.
  if (name.back() == '.') return false;
  return std::all_of(name.begin(), name.end(), name_char);
}

std::string quote_name(std::string_view name) {
  if (is_bare_name(name) || name == builtin::kTrue || name == builtin::kFalse) return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

// --- printing ----------------------------------------------------------------

namespace {

bool type_is_atomic(const Type& ty) { return ty.is_var() || ty.args().empty(); }

std::string type_atom(const Type& ty) {
  return type_is_atomic(ty) ? print_type(ty) : "(" + print_type(ty) + ")";
}

bool is_binop_name(const std::string& n) {
  return n == builtin::kEq || n == builtin::kAnd || n == builtin::kOr || n == builtin::kImp;
}

enum class Shape { Atom, Spine, Binary, Negation, Binder };

Shape shape_of(const Term& t) {
  if (t.is_var() || (t.is_const() && t.inst().empty())) return Shape::Atom;
  if (t.is_abs()) return Shape::Binder;
  if (t.is_const()) return Shape::Atom;  // printed as (C ty ...)
  auto [head, args] = strip_comb(t);
  if (head.is_const()) {
    if (args.size() == 2 && is_binop_name(head.name())) return Shape::Binary;
    if (args.size() == 1 && head.name() == builtin::kNot) return Shape::Negation;
    if (args.size() == 1 && (head.name() == builtin::kForall || head.name() == builtin::kExists) &&
        args[0].is_abs())
      return Shape::Binder;
  }
  return Shape::Spine;
}

std::string const_str(const Term& c) {
  if (c.inst().empty()) return quote_name(c.name());
  std::string s = "(" + quote_name(c.name());
  for (const auto& ty : c.inst()) s += " " + type_atom(ty);
  return s + ")";
}

std::string atom_str(const Term& t) {
  if (t.is_var()) return quote_name(t.name());
  if (t.is_const()) return const_str(t);
  return "(" + print_term(t) + ")";
}

std::string operand_str(const Term& t) {
  Shape s = shape_of(t);
  if (s == Shape::Atom || s == Shape::Spine) return print_term(t);
  return "(" + print_term(t) + ")";
}

bool mentions_const(const Term& t, const std::string& name) {
  switch (t.kind()) {
    case Term::Kind::Var: return false;
    case Term::Kind::Const: return t.name() == name;
    case Term::Kind::App: return mentions_const(t.fun(), name) || mentions_const(t.arg(), name);
    case Term::Kind::Abs: return mentions_const(t.body(), name);
  }
  return false;
}

std::string binder_str(const char* symbol, const Term& t) {
  // Collect the chain of same-kind binders.
  std::string decls;
  Term cur = t;
  auto next = [&](const Term& x) -> std::optional<std::pair<Term, Term>> {
    if (std::string_view(symbol) == "^") {
      if (x.is_abs()) return std::make_pair(x.bvar(), x.body());
      return std::nullopt;
    }
    return dest_quant(x, std::string_view(symbol) == "!" ? builtin::kForall : builtin::kExists);
  };
  while (auto b = next(cur)) {
    auto [v, body] = *b;
    // Names resolve to the nearest binder, so a free variable of the same
    // name and another type, or a constant of that name, forces a rename.
    auto clash = [&](const std::string& name) {
      for (const auto& f : free_vars(body))
        if (f.name() == name && !(f == v)) return true;
      return mentions_const(body, name);
    };
    if (clash(v.name())) {
      std::string name = v.name();
      do name += "'";
      while (clash(name));
      Term fresh = Term::var(name, v.type());
      body = subst(body, v, fresh);
      v = fresh;
    }
    if (!decls.empty()) decls += ", ";
    decls += quote_name(v.name()) + ":" + type_atom(v.type());
    cur = body;
  }
  return std::string(symbol) + "[" + decls + "]: (" + print_term(cur) + ")";
}

}  // namespace

std::string print_type(const Type& ty) {
  if (ty.is_var()) return quote_name(ty.name());
  if (ty.is_bool()) return "$o";
  if (ty.is_fun()) {
    std::string lhs = print_type(ty.domain());
    if (ty.domain().is_fun()) lhs = "(" + lhs + ")";
    return lhs + " > " + print_type(ty.range());
  }
  std::string s = quote_name(ty.name());
  for (const auto& a : ty.args()) s += " " + type_atom(a);
  return s;
}

std::string print_term(const Term& t) {
  switch (shape_of(t)) {
    case Shape::Atom: return atom_str(t);
    case Shape::Binder:
      if (t.is_abs()) return binder_str("^", t);
      return binder_str(t.fun().is_const(builtin::kForall) ? "!" : "?", t);
    case Shape::Negation: return "~ " + operand_str(t.arg());
    case Shape::Binary: {
      auto [head, args] = strip_comb(t);
      return operand_str(args[0]) + " " + head.name() + " " + operand_str(args[1]);
    }
    case Shape::Spine: {
      auto [head, args] = strip_comb(t);
      std::string s = atom_str(head);
      for (const auto& a : args) s += " " + atom_str(a);
      return s;
    }
  }
  return {};
}

std::string print_formula(const Term& t) {
  std::vector<std::string> tvs;
  collect_type_vars(t, tvs);
  std::string inner = print_term(t);
  if (!tvs.empty()) {
    std::string decls;
    for (const auto& v : tvs) {
      if (!decls.empty()) decls += ", ";
      decls += quote_name(v) + ":$t";
    }
    inner = "![" + decls + "]: (" + inner + ")";
  }
  return "(" + inner + ")";
}

// --- lexing ------------------------------------------------------------------

namespace {

enum class Tok {
  Name, LParen, RParen, LBrack, RBrack, Comma, Colon, Dot,
  Bang, Question, Caret, Tilde, Eq, Imp, And, Or, Gt,
  DollarT, DollarO, True, False, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok{Tok::End, {}, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(tok);
        return out;
      }
      char c = src_[pos_];
      if (c == '\'') {
        tok.kind = Tok::Name;
        tok.text = quoted();
      } else if (name_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && name_char(src_[pos_])) advance();
        // Give back a trailing '.' so `x).` and `p.` terminate correctly.
        while (pos_ - start > 1 && src_[pos_ - 1] == '.') {
          --pos_;
          --col_;
        }
        tok.kind = Tok::Name;
        tok.text = std::string(src_.substr(start, pos_ - start));
      } else if (c == '$') {
        std::size_t start = pos_;
        advance();
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) advance();
        std::string_view w = src_.substr(start, pos_ - start);
        if (w == "$t") tok.kind = Tok::DollarT;
        else if (w == "$o") tok.kind = Tok::DollarO;
        else if (w == "$true") tok.kind = Tok::True;
        else if (w == "$false") tok.kind = Tok::False;
        else fail("unknown defined word " + std::string(w), tok.line, tok.col);
        tok.text = std::string(w);
      } else if (c == '=' && peek(1) == '>') {
        tok.kind = Tok::Imp;
        advance();
        advance();
      } else {
        switch (c) {
          case '(': tok.kind = Tok::LParen; break;
          case ')': tok.kind = Tok::RParen; break;
          case '[': tok.kind = Tok::LBrack; break;
          case ']': tok.kind = Tok::RBrack; break;
          case ',': tok.kind = Tok::Comma; break;
          case ':': tok.kind = Tok::Colon; break;
          case '.': tok.kind = Tok::Dot; break;
          case '!': tok.kind = Tok::Bang; break;
          case '?': tok.kind = Tok::Question; break;
          case '^': tok.kind = Tok::Caret; break;
          case '~': tok.kind = Tok::Tilde; break;
          case '=': tok.kind = Tok::Eq; break;
          case '&': tok.kind = Tok::And; break;
          case '|': tok.kind = Tok::Or; break;
          case '>': tok.kind = Tok::Gt; break;
          default: fail(std::string("unexpected character '") + c + "'", line_, col_);
        }
        tok.text = std::string(1, c);
        advance();
      }
      out.push_back(std::move(tok));
    }
  }

  [[noreturn]] static void fail(const std::string& msg, int line, int col) {
    throw Error(Errc::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

 private:
  char peek(std::size_t off) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string quoted() {
    int line = line_, col = col_;
    advance();
    std::string s;
    while (pos_ < src_.size() && src_[pos_] != '\'') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
      s += src_[pos_];
      advance();
    }
    if (pos_ >= src_.size()) fail("unterminated quoted name", line, col);
    advance();
    return s;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// --- parsing -----------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, Signature& sig) : toks_(Lexer(text).run()), sig_(sig) {}

  bool at_end() const { return cur().kind == Tok::End; }

  std::vector<ObjectEntry> entries(const std::string& theory) {
    std::vector<ObjectEntry> out;
    while (!at_end()) {
      ObjectEntry e = entry();
      e.theory = theory;
      e.seq = out.size();
      out.push_back(std::move(e));
    }
    return out;
  }

  Term whole_term() {
    Term t = formula();
    expect(Tok::End, "end of input");
    return t;
  }

  Type whole_type() {
    Type t = type();
    expect(Tok::End, "end of input");
    return t;
  }

  void push_type_vars(const std::vector<std::string>& vs) {
    for (const auto& v : vs) tyvars_.push_back(v);
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (cur().kind != k) fail(std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = cur();
    std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    Lexer::fail(msg + " near " + near, t.line, t.col);
  }
  // Re-throws non-parse errors with the current location attached.
  template <class F>
  auto located(F&& f) -> decltype(f()) {
    int line = cur().line, col = cur().col;
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError) throw;
      throw Error(e.code(), std::to_string(line) + ":" + std::to_string(col) + ": " +
                                std::string(e.what()).substr(std::string(errc_name(e.code())).size() + 2));
    }
  }

  ObjectEntry entry() {
    const Token& head = expect(Tok::Name, "'tt'");
    if (head.text != "tt") fail("expected 'tt'");
    expect(Tok::LParen, "'('");
    ObjectEntry e;
    e.name = expect(Tok::Name, "entry name").text;
    expect(Tok::Comma, "','");
    const Token& role = expect(Tok::Name, "role");
    expect(Tok::Comma, "','");
    if (role.text == "ty") {
      declaration(e);
    } else if (role.text == "ax" || role.text == "def" || role.text == "conj") {
      e.role = role.text == "conj" ? Role::Conjecture : Role::Theorem;
      e.definition = role.text == "def";
      Term t = formula();
      Type ty = located([&] { return typecheck(t, sig_); });
      if (!ty.is_bool()) throw Error(Errc::NotBoolean, e.name + " is not a boolean formula");
      e.formula = t;
    } else {
      fail("unknown role " + role.text);
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.'");
    return e;
  }

  void declaration(ObjectEntry& e) {
    if (cur().kind == Tok::DollarT) {
      std::size_t count = 0;
      do {
        expect(Tok::DollarT, "'$t'");
        ++count;
      } while (accept(Tok::Gt));
      e.role = Role::TypeDecl;
      e.formula = TypeDeclInfo{count - 1};
      sig_.add_type(e.name, count - 1);
      return;
    }
    ConstInfo info;
    std::size_t saved = tyvars_.size();
    if (cur().kind == Tok::Bang) {
      next();
      expect(Tok::LBrack, "'['");
      do {
        info.params.push_back(expect(Tok::Name, "type variable").text);
        expect(Tok::Colon, "':'");
        expect(Tok::DollarT, "'$t'");
      } while (accept(Tok::Comma));
      expect(Tok::RBrack, "']'");
      expect(Tok::Colon, "':'");
      push_type_vars(info.params);
    }
    info.type = type();
    tyvars_.resize(saved);
    e.role = Role::ConstDecl;
    e.formula = info;
    sig_.add_const(e.name, info);
  }

  // types

  bool is_tyvar(const std::string& n) const {
    return std::find(tyvars_.begin(), tyvars_.end(), n) != tyvars_.end();
  }

  Type type() {
    Type lhs = type_app();
    if (accept(Tok::Gt)) return Type::fun(lhs, type());
    return lhs;
  }

  Type type_app() {
    if (accept(Tok::DollarO)) return Type::boolean();
    if (accept(Tok::LParen)) {
      Type t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    const Token& tok = expect(Tok::Name, "type");
    if (is_tyvar(tok.text)) return Type::var(tok.text);
    if (tok.text == builtin::kBool) return Type::boolean();
    auto arity = sig_.type_arity(tok.text);
    if (!arity) {
      --pos_;
      located([&]() -> int { throw Error(Errc::UnknownSymbol, "unknown type " + tok.text); });
    }
    std::vector<Type> args;
    for (std::size_t i = 0; i < *arity; ++i) args.push_back(type_app());
    if (tok.text == builtin::kFun) return Type::fun(args[0], args[1]);
    return Type::app(tok.text, std::move(args));
  }

  // terms

  int binop_prec(Tok k) const {
    switch (k) {
      case Tok::Imp: return 1;
      case Tok::Or: return 2;
      case Tok::And: return 3;
      case Tok::Eq: return 4;
      default: return 0;
    }
  }

  Term formula(int min_prec = 1) {
    Term lhs = unary();
    for (;;) {
      Tok k = cur().kind;
      int prec = binop_prec(k);
      if (prec == 0 || prec < min_prec) return lhs;
      next();
      // `=` is non-associative; the others associate to the right.
      Term rhs = formula(k == Tok::Eq ? prec + 1 : prec);
      const char* op = k == Tok::Imp ? builtin::kImp : k == Tok::Or ? builtin::kOr
                     : k == Tok::And ? builtin::kAnd : builtin::kEq;
      lhs = located([&] { return mk_binop(op, lhs, rhs); });
    }
  }

  Term unary() {
    if (accept(Tok::Tilde)) {
      Term p = unary();
      return mk_not(p);
    }
    if ((cur().kind == Tok::Bang || cur().kind == Tok::Question || cur().kind == Tok::Caret) &&
        toks_[pos_ + 1].kind == Tok::LBrack)
      return binder();
    return application();
  }

  Term binder() {
    Tok kind = next().kind;
    expect(Tok::LBrack, "'['");
    std::vector<Term> vars;
    std::size_t saved_vars = vars_.size();
    std::size_t saved_tys = tyvars_.size();
    do {
      std::string name = expect(Tok::Name, "variable").text;
      expect(Tok::Colon, "':'");
      if (accept(Tok::DollarT)) {
        if (kind != Tok::Bang) fail("type variables may only be bound by '!'");
        tyvars_.push_back(name);
        continue;
      }
      Type ty = type();
      Term v = Term::var(name, ty);
      vars.push_back(v);
      vars_.push_back(v);
    } while (accept(Tok::Comma));
    expect(Tok::RBrack, "']'");
    expect(Tok::Colon, "':'");
    Term body = unary();
    vars_.resize(saved_vars);
    tyvars_.resize(saved_tys);
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (kind == Tok::Caret) body = Term::abs(vars[i], body);
      else body = mk_quant(kind == Tok::Bang ? builtin::kForall : builtin::kExists, vars[i], body);
    }
    return body;
  }

  bool starts_atom() const {
    Tok k = cur().kind;
    return k == Tok::Name || k == Tok::LParen || k == Tok::True || k == Tok::False;
  }

  Term application() {
    Term head = atom();
    while (starts_atom()) {
      Term arg = atom();
      head = Term::app(head, arg);
    }
    return head;
  }

  Term atom() {
    if (accept(Tok::True)) return mk_truth(true);
    if (accept(Tok::False)) return mk_truth(false);
    if (accept(Tok::LParen)) {
      Term t = formula();
      expect(Tok::RParen, "')'");
      return t;
    }
    const Token& tok = cur();
    if (tok.kind != Tok::Name) fail("expected a term");
    next();
    for (std::size_t i = vars_.size(); i-- > 0;)
      if (vars_[i].name() == tok.text) return vars_[i];
    const ConstInfo* info = sig_.find_const(tok.text);
    if (!info) {
      --pos_;
      located([&]() -> int { throw Error(Errc::UnknownSymbol, "unknown symbol " + tok.text); });
    }
    std::vector<Type> inst;
    for (std::size_t i = 0; i < info->params.size(); ++i) {
      if (cur().kind != Tok::Name && cur().kind != Tok::LParen && cur().kind != Tok::DollarO)
        fail("constant " + tok.text + " needs " + std::to_string(info->params.size()) + " type arguments");
      inst.push_back(type_app());
    }
    return sig_.mk_const(tok.text, inst);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature& sig_;
  std::vector<Term> vars_;
  std::vector<std::string> tyvars_;
};

}  // namespace

Type parse_type(std::string_view text, const Signature& sig, const std::vector<std::string>& type_vars) {
  Signature copy = sig;
  Parser p(text, copy);
  p.push_type_vars(type_vars);
  return p.whole_type();
}

Term parse_term(std::string_view text, const Signature& sig) {
  Signature copy = sig;
  Parser p(text, copy);
  Term t = p.whole_term();
  typecheck(t, sig);
  return t;
}

bool same_entry(const ObjectEntry& a, const ObjectEntry& b) {
  if (a.name != b.name || a.role != b.role || a.definition != b.definition) return false;
  if (a.formula.index() != b.formula.index()) return false;
  if (auto* x = std::get_if<TypeDeclInfo>(&a.formula)) return *x == std::get<TypeDeclInfo>(b.formula);
  if (auto* x = std::get_if<ConstInfo>(&a.formula)) {
    const auto& y = std::get<ConstInfo>(b.formula);
    return x->params == y.params && x->type == y.type;
  }
  return std::get<Term>(a.formula) == std::get<Term>(b.formula);
}

std::vector<ObjectEntry> parse_tt(std::string_view text, Signature& sig, const std::string& theory) {
  Parser p(text, sig);
  return p.entries(theory);
}

std::string print_tt(const ObjectEntry& e) {
  std::string role;
  std::string body;
  switch (e.role) {
    case Role::TypeDecl: {
      role = "ty";
      std::size_t arity = std::get<TypeDeclInfo>(e.formula).arity;
      body = "$t";
      for (std::size_t i = 0; i < arity; ++i) body += " > $t";
      break;
    }
    case Role::ConstDecl: {
      role = "ty";
      const auto& info = std::get<ConstInfo>(e.formula);
      body = print_type(info.type);
      if (!info.params.empty()) {
        std::string decls;
        for (const auto& v : info.params) {
          if (!decls.empty()) decls += ", ";
          decls += quote_name(v) + ":$t";
        }
        body = "![" + decls + "]: (" + body + ")";
      }
      break;
    }
    case Role::Theorem:
    case Role::Conjecture:
      role = e.role == Role::Conjecture ? "conj" : e.definition ? "def" : "ax";
      body = print_formula(e.statement());
      break;
  }
  return "tt(" + quote_name(e.name) + ", " + role + ", " + body + ").";
}

}  // namespace hammer
