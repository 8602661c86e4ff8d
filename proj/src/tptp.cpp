#include "hammer/tptp.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <set>

#include "hammer/error.hpp"

namespace hammer {

namespace {

bool is_lower_word(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string single_quoted(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace

std::string tptp_symbol(std::string_view name) {
  return is_lower_word(name) ? std::string(name) : single_quoted(name);
}

std::string tptp_formula_name(std::string_view name) {
  bool bare = !name.empty() && std::islower(static_cast<unsigned char>(name[0])) &&
              std::all_of(name.begin(), name.end(), [](char c) {
                return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
                       c == '_';
              });
  return bare ? std::string(name) : single_quoted(name);
}

// --- printing ----------------------------------------------------------------

std::string print_term(const FofTerm& t) {
  if (t.is_var()) return t.name;
  std::string s = tptp_symbol(t.name);
  if (t.args.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) s += (i ? "," : "") + print_term(t.args[i]);
  return s + ")";
}

namespace {

const char* binop_text(FofFormula::Kind k) {
  switch (k) {
    case FofFormula::Kind::And: return "&";
    case FofFormula::Kind::Or: return "|";
    case FofFormula::Kind::Imp: return "=>";
    case FofFormula::Kind::Iff: return "<=>";
    default: return "?";
  }
}

bool is_infix_eq(const FofFormula& f) {
  return f.kind == FofFormula::Kind::Eq ||
         (f.kind == FofFormula::Kind::Not && f.subs[0].kind == FofFormula::Kind::Eq);
}

std::string bare(const FofFormula& f);

// Unitary rendering: binary formulas get parentheses.
std::string unit(const FofFormula& f) { return f.is_binary() ? "(" + bare(f) + ")" : bare(f); }

std::string bare(const FofFormula& f) {
  using K = FofFormula::Kind;
  switch (f.kind) {
    case K::True: return "$true";
    case K::False: return "$false";
    case K::Pred: return print_term(FofTerm::fn(f.name, f.args));
    case K::Eq: return print_term(f.args[0]) + " = " + print_term(f.args[1]);
    case K::Not: {
      const auto& s = f.subs[0];
      if (s.kind == K::Eq) return print_term(s.args[0]) + " != " + print_term(s.args[1]);
      if (is_infix_eq(s)) return "~ (" + bare(s) + ")";
      return "~ " + unit(s);
    }
    case K::And:
    case K::Or:
    case K::Imp:
    case K::Iff:
      return unit(f.subs[0]) + " " + binop_text(f.kind) + " " + unit(f.subs[1]);
    case K::Forall:
    case K::Exists: {
      std::string s = f.kind == K::Forall ? "![" : "?[";
      for (std::size_t i = 0; i < f.vars.size(); ++i) s += (i ? "," : "") + f.vars[i];
      return s + "]: (" + bare(f.subs[0]) + ")";
    }
  }
  return {};
}

}  // namespace

std::string print_formula(const FofFormula& f) { return unit(f); }

std::string print_problem(const FofProblem& p) {
  std::string out;
  for (const auto& a : p.formulas)
    out += "fof(" + tptp_formula_name(a.name) + ", " + a.role + ", " + print_formula(a.formula) + ").\n";
  return out;
}

// --- parsing -----------------------------------------------------------------

namespace {

enum class T {
  Lower, Upper, Quoted, Dollar, LParen, RParen, LBrack, RBrack, Comma, Colon, Dot,
  Bang, Question, Tilde, And, Or, Eq, Neq, Imp, RevImp, Iff, Xor, Nor, Nand, Other, End
};

struct Tok {
  T kind;
  std::string text;
  int line, col;
};

std::vector<Tok> lex(std::string_view s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto fail = [&](const std::string& msg) {
    throw Error(Errc::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  };
  while (true) {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) adv(1);
      else if (s[i] == '%') {
        while (i < s.size() && s[i] != '\n') adv(1);
      } else if (s.substr(i, 2) == "/*") {
        auto end = s.find("*/", i + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        adv(end + 2 - i);
      } else {
        break;
      }
    }
    Tok t{T::End, {}, line, col};
    if (i >= s.size()) {
      out.push_back(t);
      return out;
    }
    char c = s[i];
    auto word = [&] {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      return std::string(s.substr(i, j - i));
    };
    if (std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = T::Lower;
      t.text = word();
      adv(t.text.size());
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      t.kind = T::Upper;
      t.text = word();
      adv(t.text.size());
    } else if (c == '$') {
      adv(1);
      t.kind = T::Dollar;
      t.text = "$" + word();
      adv(t.text.size() - 1);
    } else if (c == '\'') {
      adv(1);
      while (i < s.size() && s[i] != '\'') {
        if (s[i] == '\\') adv(1);
        if (i < s.size()) {
          t.text += s[i];
          adv(1);
        }
      }
      if (i >= s.size()) fail("unterminated quoted name");
      adv(1);
      t.kind = T::Quoted;
    } else {
      static const std::pair<const char*, T> ops[] = {
          {"<~>", T::Xor}, {"<=>", T::Iff}, {"=>", T::Imp}, {"<=", T::RevImp}, {"!=", T::Neq}, {"~|", T::Nor},
          {"~&", T::Nand}, {"(", T::LParen}, {")", T::RParen}, {"[", T::LBrack}, {"]", T::RBrack}, {",", T::Comma},
          {":", T::Colon}, {".", T::Dot}, {"!", T::Bang}, {"?", T::Question}, {"~", T::Tilde}, {"&", T::And},
          {"|", T::Or}, {"=", T::Eq}};
      bool found = false;
      for (const auto& [text, kind] : ops) {
        if (s.substr(i, std::char_traits<char>::length(text)) == text) {
          t.kind = kind;
          t.text = text;
          adv(t.text.size());
          found = true;
          break;
        }
      }
      if (!found) fail(std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
}

class TptpParser {
 public:
  explicit TptpParser(std::string_view s) : toks_(lex(s)) {}

  FofProblem problem() {
    FofProblem p;
    while (cur().kind != T::End) {
      const Tok& kw = expect(T::Lower, "fof");
      if (kw.text != "fof") fail("only fof(...) entries are supported");
      expect(T::LParen, "'('");
      FofAnnotated a;
      a.name = name();
      expect(T::Comma, "','");
      a.role = expect(T::Lower, "role").text;
      expect(T::Comma, "','");
      a.formula = formula();
      if (accept(T::Comma)) skip_annotations();
      expect(T::RParen, "')'");
      expect(T::Dot, "'.'");
      p.formulas.push_back(std::move(a));
    }
    return p;
  }

 private:
  const Tok& cur() const { return toks_[pos_]; }
  bool accept(T k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }
  const Tok& expect(T k, const char* what) {
    if (cur().kind != k) fail(std::string("expected ") + what);
    return toks_[pos_++];
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::ParseError, std::to_string(cur().line) + ":" + std::to_string(cur().col) + ": " + msg +
                                      (cur().kind == T::End ? " at end of input" : " near '" + cur().text + "'"));
  }

  std::string name() {
    if (cur().kind == T::Lower || cur().kind == T::Quoted || cur().kind == T::Upper) return toks_[pos_++].text;
    fail("expected a name");
  }

  void skip_annotations() {
    int depth = 0;
    while (cur().kind != T::End) {
      if (cur().kind == T::RParen && depth == 0) return;
      if (cur().kind == T::LParen || cur().kind == T::LBrack) ++depth;
      if (cur().kind == T::RParen || cur().kind == T::RBrack) --depth;
      ++pos_;
    }
  }

  FofFormula formula() {
    using K = FofFormula::Kind;
    FofFormula lhs = unitary();
    T k = cur().kind;
    if (k == T::And || k == T::Or) {
      while (accept(k)) lhs = FofFormula::binary(k == T::And ? K::And : K::Or, std::move(lhs), unitary());
      return lhs;
    }
    switch (k) {
      case T::Imp: ++pos_; return FofFormula::binary(K::Imp, std::move(lhs), unitary());
      case T::RevImp: ++pos_; { auto r = unitary(); return FofFormula::binary(K::Imp, std::move(r), std::move(lhs)); }
      case T::Iff: ++pos_; return FofFormula::binary(K::Iff, std::move(lhs), unitary());
      case T::Xor: ++pos_; return FofFormula::negate(FofFormula::binary(K::Iff, std::move(lhs), unitary()));
      case T::Nor: ++pos_; return FofFormula::negate(FofFormula::binary(K::Or, std::move(lhs), unitary()));
      case T::Nand: ++pos_; return FofFormula::negate(FofFormula::binary(K::And, std::move(lhs), unitary()));
      default: return lhs;
    }
  }

  FofFormula unitary() {
    using K = FofFormula::Kind;
    if (cur().kind == T::Bang || cur().kind == T::Question) {
      K q = cur().kind == T::Bang ? K::Forall : K::Exists;
      ++pos_;
      expect(T::LBrack, "'['");
      std::vector<std::string> vars;
      do {
        vars.push_back(expect(T::Upper, "variable").text);
      } while (accept(T::Comma));
      expect(T::RBrack, "']'");
      expect(T::Colon, "':'");
      return FofFormula::quant(q, std::move(vars), unitary());
    }
    if (accept(T::Tilde)) return FofFormula::negate(unitary());
    if (accept(T::LParen)) {
      FofFormula f = formula();
      expect(T::RParen, "')'");
      return f;
    }
    if (cur().kind == T::Dollar) {
      std::string w = toks_[pos_++].text;
      if (w == "$true") return FofFormula::truth(true);
      if (w == "$false") return FofFormula::truth(false);
      fail("unsupported defined word " + w);
    }
    FofTerm lhs = term();
    if (accept(T::Eq)) return FofFormula::eq(std::move(lhs), term());
    if (accept(T::Neq)) return FofFormula::negate(FofFormula::eq(std::move(lhs), term()));
    if (lhs.is_var()) fail("a variable is not a formula");
    return FofFormula::pred(std::move(lhs.name), std::move(lhs.args));
  }

  FofTerm term() {
    if (cur().kind == T::Upper) return FofTerm::var(toks_[pos_++].text);
    if (cur().kind != T::Lower && cur().kind != T::Quoted) fail("expected a term");
    FofTerm t = FofTerm::fn(toks_[pos_++].text);
    if (accept(T::LParen)) {
      do {
        t.args.push_back(term());
      } while (accept(T::Comma));
      expect(T::RParen, "')'");
    }
    return t;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

FofProblem parse_problem(std::string_view text) { return TptpParser(text).problem(); }

// --- SMT-LIB2 ------------------------------------------------------------------

namespace {

std::string smt_sym(const std::string& s) {
  std::string out = "|";
  for (char c : s)
    if (c != '|' && c != '\\') out += c;
  return out + "|";
}

std::string smt_term(const FofTerm& t) {
  if (t.is_var() || t.args.empty()) return smt_sym(t.name);
  std::string s = "(" + smt_sym(t.name);
  for (const auto& a : t.args) s += " " + smt_term(a);
  return s + ")";
}

void collect(const FofTerm& t, std::set<std::string>& vars, std::set<std::string>& syms) {
  if (t.is_var()) vars.insert(t.name);
  else if (!encoding_symbols().count(t.name)) syms.insert(t.name);
  for (const auto& a : t.args) collect(a, vars, syms);
}

void collect(const FofFormula& f, std::set<std::string>& vars, std::set<std::string>& syms) {
  for (const auto& a : f.args) collect(a, vars, syms);
  for (const auto& s : f.subs) collect(s, vars, syms);
  if (f.kind == FofFormula::Kind::Pred && !encoding_symbols().count(f.name)) syms.insert(f.name);
}

// Triggers for a quantified equation (or equivalence with atomic sides).
// A side qualifies when it covers every bound variable and names a problem
// symbol. The left side is used when it qualifies; the right side too,
// unless it merely unfolds the left (mentions all of its symbols), so a
// definition fires on its defined side and a proxy equation both ways.
// Left to itself z3 may pick a side that never occurs in the ground
// problem, or one built from encoding symbols that matches almost
// anything and loops.
std::string smt_patterns(const FofFormula& f) {
  using K = FofFormula::Kind;
  const FofFormula& body = f.subs[0];
  if (body.kind != K::Eq && body.kind != K::Iff) return {};
  std::optional<FofTerm> sides[2];
  std::set<std::string> vars[2], syms[2];
  for (int i = 0; i < 2; ++i) {
    if (body.kind == K::Eq) {
      sides[i] = body.args[i];
      collect(*sides[i], vars[i], syms[i]);
    } else {
      const FofFormula& side = body.subs[i];
      if (side.kind == K::Pred) sides[i] = FofTerm::fn(side.name, side.args);
      collect(side, vars[i], syms[i]);
    }
  }
  auto usable = [&](int i) {
    return sides[i] && !syms[i].empty() &&
           std::all_of(f.vars.begin(), f.vars.end(), [&](const auto& v) { return vars[i].count(v); });
  };
  bool unfolds = std::includes(syms[1].begin(), syms[1].end(), syms[0].begin(), syms[0].end());
  std::string out;
  if (usable(0)) out += " :pattern (" + smt_term(*sides[0]) + ")";
  if (usable(1) && (!unfolds || !usable(0))) out += " :pattern (" + smt_term(*sides[1]) + ")";
  return out;
}

// `top`: f is an axiom root or sits under conjunctions only, where a
// universal stays universal and triggers are meaningful.
std::string smt_formula(const FofFormula& f, bool top = false) {
  using K = FofFormula::Kind;
  switch (f.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Pred: return smt_term(FofTerm::fn(f.name, f.args));
    case K::Eq: return "(= " + smt_term(f.args[0]) + " " + smt_term(f.args[1]) + ")";
    case K::Not: return "(not " + smt_formula(f.subs[0]) + ")";
    case K::And: return "(and " + smt_formula(f.subs[0], top) + " " + smt_formula(f.subs[1], top) + ")";
    case K::Or: return "(or " + smt_formula(f.subs[0]) + " " + smt_formula(f.subs[1]) + ")";
    case K::Imp: return "(=> " + smt_formula(f.subs[0]) + " " + smt_formula(f.subs[1]) + ")";
    case K::Iff: return "(= " + smt_formula(f.subs[0]) + " " + smt_formula(f.subs[1]) + ")";
    case K::Forall:
    case K::Exists: {
      std::string s = f.kind == K::Forall ? "(forall (" : "(exists (";
      for (std::size_t i = 0; i < f.vars.size(); ++i) s += (i ? " (" : "(") + smt_sym(f.vars[i]) + " U)";
      std::string pats = top && f.kind == K::Forall ? smt_patterns(f) : std::string();
      bool inner = top && f.kind == K::Forall;
      if (pats.empty()) return s + ") " + smt_formula(f.subs[0], inner) + ")";
      return s + ") (! " + smt_formula(f.subs[0]) + pats + "))";
    }
  }
  return {};
}

}  // namespace

namespace {

// `:named` labels share the namespace of function symbols, so a label equal
// to a problem symbol (or to an earlier label) gets a numeric suffix.
std::vector<std::string> smt_labels(const FofProblem& p) {
  std::set<std::string> taken;
  for (const auto& [name, use] : scan_symbols(p).symbols) taken.insert(name);
  std::vector<std::string> out;
  for (const auto& a : p.formulas) {
    std::string label = a.name;
    for (int k = 1; taken.count(label); ++k) label = a.name + "_" + std::to_string(k);
    taken.insert(label);
    out.push_back(label);
  }
  return out;
}

}  // namespace

std::string print_smt2(const FofProblem& p) {
  std::string out = "(set-option :produce-unsat-cores true)\n(declare-sort U 0)\n";
  for (const auto& [name, use] : scan_symbols(p).symbols) {
    out += "(declare-fun " + smt_sym(name) + " (";
    for (std::size_t i = 0; i < use.arity; ++i) out += i ? " U" : "U";
    out += std::string(") ") + (use.predicate ? "Bool" : "U") + ")\n";
  }
  auto labels = smt_labels(p);
  for (std::size_t i = 0; i < p.formulas.size(); ++i) {
    const auto& a = p.formulas[i];
    // Miniscoping matters for SMT solvers: a trigger must cover every bound
    // variable, so a variable used in one conjunct only blocks the others.
    bool conj = a.role == "conjecture";
    std::string body = smt_formula(miniscope(a.formula), !conj);
    if (conj) body = "(not " + body + ")";
    out += "(assert (! " + body + " :named " + smt_sym(labels[i]) + "))\n";
  }
  return out + "(check-sat)\n(get-unsat-core)\n";
}

// --- prover output -----------------------------------------------------------

const char* szs_name(SzsStatus s) {
  switch (s) {
    case SzsStatus::Theorem: return "Theorem";
    case SzsStatus::Unsatisfiable: return "Unsatisfiable";
    case SzsStatus::CounterSatisfiable: return "CounterSatisfiable";
    case SzsStatus::Satisfiable: return "Satisfiable";
    case SzsStatus::Timeout: return "Timeout";
    case SzsStatus::GaveUp: return "GaveUp";
    case SzsStatus::Error: return "Error";
  }
  return "?";
}

bool proves(SzsStatus s) { return s == SzsStatus::Theorem || s == SzsStatus::Unsatisfiable; }

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string_view> lines_of(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < s.size()) out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

}  // namespace

SzsResult parse_szs(std::string_view output, bool killed, int exit_code, bool has_conjecture) {
  auto normalize = [&](SzsStatus s) {
    if (s == SzsStatus::Unsatisfiable && has_conjecture) return SzsStatus::Theorem;
    return s;
  };
  for (auto line : lines_of(output)) {
    auto pos = line.find("SZS status ");
    if (pos == std::string_view::npos) continue;
    std::string word;
    for (std::size_t i = pos + 11; i < line.size() && std::isalnum(static_cast<unsigned char>(line[i])); ++i)
      word += line[i];
    if (word == "Theorem") return {SzsStatus::Theorem, {}};
    if (word == "Unsatisfiable") return {normalize(SzsStatus::Unsatisfiable), {}};
    if (word == "ContradictoryAxioms") return {SzsStatus::Theorem, {}};
    if (word == "CounterSatisfiable") return {SzsStatus::CounterSatisfiable, {}};
    if (word == "Satisfiable") return {SzsStatus::Satisfiable, {}};
    if (word == "Timeout" || word == "ResourceOut") return {SzsStatus::Timeout, {}};
    if (word == "GaveUp" || word == "Unknown" || word == "Incomplete" || word == "Inappropriate" ||
        word == "MemoryOut")
      return {SzsStatus::GaveUp, {}};
    return {SzsStatus::Error, trim(line)};
  }
  for (auto line : lines_of(output)) {
    std::string t = trim(line);
    if (t == "unsat") return {normalize(SzsStatus::Unsatisfiable), {}};
    if (t == "sat") return {has_conjecture ? SzsStatus::CounterSatisfiable : SzsStatus::Satisfiable, {}};
    if (t == "unknown") return {SzsStatus::GaveUp, {}};
    if (t == "timeout") return {SzsStatus::Timeout, {}};
  }
  if (killed) return {SzsStatus::Timeout, {}};
  std::string tail = trim(output.substr(output.size() > 400 ? output.size() - 400 : 0));
  if (exit_code != 0) return {SzsStatus::Error, "exit code " + std::to_string(exit_code) + ": " + tail};
  return {SzsStatus::Error, "no status in prover output: " + tail};
}

CoreResult extract_core(std::string_view output, const FofProblem& problem) {
  std::vector<std::string> axioms = problem.axiom_names();
  std::set<std::string> cited;
  bool found = false;

  std::string text(output);
  auto start = text.find("SZS output start");
  if (start != std::string::npos) {
    found = true;
    auto end = text.find("SZS output end", start);
    std::string block = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    static const std::string name = R"(('(?:[^'\\]|\\.)*'|[A-Za-z0-9_$]+))";
    static const std::regex patterns[] = {
        std::regex(R"((?:fof|cnf)\(\s*)" + name + R"(\s*,\s*axiom)"),
        std::regex(R"(file\(\s*(?:'(?:[^'\\]|\\.)*'|[^,()]*)\s*,\s*)" + name + R"(\s*\))"),
        std::regex(R"(\[input(?:\([a-z_]+\))?\s+)" + name + R"(\])"),
    };
    for (const auto& re : patterns) {
      for (std::sregex_iterator it(block.begin(), block.end(), re), e; it != e; ++it) {
        std::string n = (*it)[1].str();
        if (n.size() >= 2 && n.front() == '\'') {
          std::string u;
          for (std::size_t i = 1; i + 1 < n.size(); ++i) {
            if (n[i] == '\\' && i + 2 < n.size()) ++i;
            u += n[i];
          }
          n = u;
        }
        cited.insert(n);
      }
    }
  } else {
    auto lines = lines_of(output);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (trim(lines[i]) != "unsat") continue;
      // The core follows as one parenthesized list, possibly over several lines.
      std::string list;
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        list += std::string(lines[j]) + " ";
        if (list.find(')') != std::string::npos) break;
      }
      auto open = list.find('('), close = list.find(')');
      if (open == std::string::npos || close == std::string::npos || list.find("error") != std::string::npos) break;
      found = true;
      std::string cur;
      bool bar = false;
      for (std::size_t k = open + 1; k < close; ++k) {
        char c = list[k];
        if (c == '|') {
          bar = !bar;
        } else if (!bar && std::isspace(static_cast<unsigned char>(c))) {
          if (!cur.empty()) cited.insert(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!cur.empty()) cited.insert(cur);
      auto labels = smt_labels(problem);
      std::set<std::string> names;
      for (std::size_t k = 0; k < labels.size(); ++k)
        if (cited.count(labels[k])) names.insert(problem.formulas[k].name);
      cited = std::move(names);
      break;
    }
  }

  CoreResult r;
  if (!found) {
    r.axioms = axioms;
    r.complete = false;
    return r;
  }
  for (const auto& a : axioms)
    if (cited.count(a)) r.axioms.push_back(a);
  return r;
}

}  // namespace hammer
