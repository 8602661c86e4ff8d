#include <functional>
#include <map>

#include "doctest.h"
#include "gen.hpp"
#include "hammer/fof.hpp"
#include "hammer/tptp.hpp"

using namespace hammer;

namespace {

using F = FofFormula;
using K = FofFormula::Kind;

FofProblem five_axioms() {
  FofProblem p;
  for (const char* n : {"ax1", "ax2", "ax3", "ax4", "ax5"})
    p.formulas.push_back({n, "axiom", F::pred("p", {FofTerm::fn(n)})});
  p.formulas.push_back({"goal", "conjecture", F::pred("q")});
  return p;
}

// Truth of a formula in a finite interpretation over {0, 1} where every
// symbol application is decided by a hash of the symbol, its arguments
// and the interpretation seed.
struct Model {
  std::size_t seed;
  std::size_t mix(const std::string& name, const std::vector<std::size_t>& args) const {
    std::size_t h = std::hash<std::string>{}(name) ^ (seed * 0x9e3779b97f4a7c15ULL);
    for (auto a : args) h = (h ^ (a + 0x7f4a7c15ULL)) * 0x100000001b3ULL;
    return (h >> 17) & 1;
  }
  std::size_t term(const FofTerm& t, std::map<std::string, std::size_t>& env) const {
    if (t.is_var()) return env.at(t.name);
    std::vector<std::size_t> args;
    for (const auto& a : t.args) args.push_back(term(a, env));
    return mix("f:" + t.name, args);
  }
  bool eval(const F& f, std::map<std::string, std::size_t>& env) const {
    switch (f.kind) {
      case K::True: return true;
      case K::False: return false;
      case K::Pred: {
        std::vector<std::size_t> args;
        for (const auto& a : f.args) args.push_back(term(a, env));
        return mix("p:" + f.name, args) == 1;
      }
      case K::Eq: return term(f.args[0], env) == term(f.args[1], env);
      case K::Not: return !eval(f.subs[0], env);
      case K::And: return eval(f.subs[0], env) && eval(f.subs[1], env);
      case K::Or: return eval(f.subs[0], env) || eval(f.subs[1], env);
      case K::Imp: return !eval(f.subs[0], env) || eval(f.subs[1], env);
      case K::Iff: return eval(f.subs[0], env) == eval(f.subs[1], env);
      case K::Forall:
      case K::Exists: return quant(f, 0, env);
    }
    return false;
  }
  bool quant(const F& f, std::size_t i, std::map<std::string, std::size_t>& env) const {
    if (i == f.vars.size()) return eval(f.subs[0], env);
    auto saved = env.find(f.vars[i]) != env.end() ? std::optional<std::size_t>(env[f.vars[i]]) : std::nullopt;
    bool all = true, any = false;
    for (std::size_t d = 0; d < 2; ++d) {
      env[f.vars[i]] = d;
      bool v = quant(f, i + 1, env);
      all = all && v;
      any = any || v;
    }
    if (saved) env[f.vars[i]] = *saved;
    else env.erase(f.vars[i]);
    return f.kind == K::Forall ? all : any;
  }
};

}  // namespace

TEST_SUITE("tptp") {
  TEST_CASE("printing") {
    FofProblem p;
    p.formulas.push_back({"goal", "conjecture", F::eq(FofTerm::fn("a"), FofTerm::fn("a"))});
    CHECK(print_problem(p) == "fof(goal, conjecture, a = a).\n");
    CHECK(tptp_formula_name("ADD_CLAUSES_c1") == "'ADD_CLAUSES_c1'");
    CHECK(tptp_formula_name("aDD_CLAUSES_c1") == "'aDD_CLAUSES_c1'");
    CHECK(tptp_formula_name("def_lam_1") == "def_lam_1");
    CHECK(tptp_symbol("sUC") == "sUC");
    CHECK(tptp_symbol("0") == "'0'");
    CHECK(tptp_symbol("it's") == "'it\\'s'");
    F f = F::quant(K::Forall, {"X", "Y"},
                   F::binary(K::Imp, F::negate(F::eq(FofTerm::var("X"), FofTerm::var("Y"))),
                             F::binary(K::Iff, F::pred("p", {FofTerm::var("X")}), F::truth(false))));
    CHECK(print_formula(f) == "![X,Y]: (X != Y => (p(X) <=> $false))");
  }

  TEST_CASE("parsing the extra connectives and comments") {
    auto p = parse_problem(
        "% comment\n"
        "/* block\n comment */\n"
        "fof(a1, axiom, (p <= q)).\n"
        "fof(a2, axiom, (p <~> q)).\n"
        "fof(a3, axiom, (p ~| q)).\n"
        "fof(a4, axiom, (p ~& q)).\n"
        "fof('goal x', conjecture, ?[X]: ~ p(X)).\n");
    REQUIRE(p.formulas.size() == 5);
    CHECK(p.formulas[0].formula == F::binary(K::Imp, F::pred("q"), F::pred("p")));
    CHECK(p.formulas[1].formula == F::negate(F::binary(K::Iff, F::pred("p"), F::pred("q"))));
    CHECK(p.formulas[2].formula == F::negate(F::binary(K::Or, F::pred("p"), F::pred("q"))));
    CHECK(p.formulas[3].formula == F::negate(F::binary(K::And, F::pred("p"), F::pred("q"))));
    CHECK(p.formulas[4].name == "goal x");
    REQUIRE(p.conjecture());
    CHECK(p.axiom_names() == std::vector<std::string>{"a1", "a2", "a3", "a4"});
  }

  TEST_CASE("parse errors carry line and column") {
    try {
      parse_problem("fof(a, axiom, p).\nfof(b, axiom, (p & )).\n");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ParseError);
      CHECK(std::string(e.what()).find("2:") != std::string::npos);
    }
  }

  TEST_CASE("print and parse round trip on random problems") {
    gen::Rng rng(1234);
    gen::FofGen g(rng);
    for (int i = 0; i < 1500; ++i) {
      FofProblem p = g.problem();
      std::string text = print_problem(p);
      CAPTURE(text);
      CHECK(parse_problem(text) == p);
    }
  }

  TEST_CASE("symbol scan reports arity conflicts") {
    FofProblem p;
    p.formulas.push_back({"a", "axiom", F::pred("p", {FofTerm::fn("f", {FofTerm::fn("c")})})});
    CHECK(scan_symbols(p).conflicts.empty());
    p.formulas.push_back({"b", "axiom", F::pred("p", {FofTerm::fn("f")})});
    CHECK_FALSE(scan_symbols(p).conflicts.empty());
    FofProblem q;
    q.formulas.push_back({"a", "axiom", F::pred("f", {FofTerm::fn("f", {FofTerm::fn("c")})})});
    CHECK_FALSE(scan_symbols(q).conflicts.empty());
  }

  TEST_CASE("miniscoping preserves truth in finite models") {
    gen::Rng rng(77);
    gen::FofGen g(rng);
    int checked = 0;
    for (int i = 0; i < 600; ++i) {
      F f = g.formula(5, {});
      F m = miniscope(f);
      CHECK(free_vars(m) == free_vars(f));
      for (std::size_t seed = 0; seed < 4; ++seed) {
        Model model{seed};
        std::map<std::string, std::size_t> e1, e2;
        CHECK(model.eval(f, e1) == model.eval(m, e2));
        ++checked;
      }
    }
    CHECK(checked == 2400);
  }

  TEST_CASE("miniscoping distributes universals over conjunctions") {
    F body = F::binary(K::And, F::pred("p", {FofTerm::var("X")}), F::pred("q", {FofTerm::var("Y")}));
    F m = miniscope(F::quant(K::Forall, {"X", "Y"}, body));
    CHECK(print_formula(m) == "(![X]: (p(X)) & ![Y]: (q(Y)))");
  }

  TEST_CASE("smt2 output names every assertion and negates the conjecture") {
    FofProblem p = five_axioms();
    std::string s = print_smt2(p);
    // the axiom names double as constants here, so the labels are renamed
    CHECK(s.find(":named |ax1_1|") != std::string::npos);
    CHECK(s.find("(assert (! (not |q|) :named |goal|))") != std::string::npos);
    CHECK(s.find("(check-sat)") != std::string::npos);
    CHECK(s.find("(get-unsat-core)") != std::string::npos);
    auto core = extract_core("unsat\n(|ax1_1| ax3_1 goal)\n", p);
    CHECK(core.axioms == std::vector<std::string>{"ax1", "ax3"});
  }

  TEST_CASE("parse_szs") {
    CHECK(parse_szs("% SZS status Theorem for x\n").status == SzsStatus::Theorem);
    CHECK(parse_szs("% SZS status CounterSatisfiable for x\n").status == SzsStatus::CounterSatisfiable);
    CHECK(parse_szs("# SZS status Unsatisfiable\n").status == SzsStatus::Theorem);
    CHECK(parse_szs("# SZS status Unsatisfiable\n", false, 0, false).status == SzsStatus::Unsatisfiable);
    CHECK(parse_szs("% SZS status GaveUp\n").status == SzsStatus::GaveUp);
    CHECK(parse_szs("% SZS status Timeout\n").status == SzsStatus::Timeout);
    CHECK(parse_szs("", true).status == SzsStatus::Timeout);
    CHECK(parse_szs("unsat\n(ax1)\n").status == SzsStatus::Theorem);
    CHECK(parse_szs("sat\n").status == SzsStatus::CounterSatisfiable);
    auto err = parse_szs("segfault", false, 139);
    CHECK(err.status == SzsStatus::Error);
    CHECK(err.detail.find("139") != std::string::npos);
    CHECK(parse_szs("").status == SzsStatus::Error);
    CHECK(proves(SzsStatus::Theorem));
    CHECK_FALSE(proves(SzsStatus::CounterSatisfiable));
  }

  TEST_CASE("parse_szs is total") {
    gen::Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
      std::string s;
      for (std::size_t n = rng.below(200); n > 0; --n) s += static_cast<char>(rng.below(256));
      if (rng.chance(0.2)) s += "SZS status ";
      SzsResult r;
      CHECK_NOTHROW(r = parse_szs(s, rng.chance(0.5), static_cast<int>(rng.below(3))));
    }
  }

  TEST_CASE("core from a Vampire derivation") {
    std::string out =
        "% SZS status Theorem for p\n% SZS output start Proof for p\n"
        "1. p(ax2) [input ax2]\n2. p(ax4) [input ax4]\n3. q [input goal]\n4. ~q [negated conjecture 3]\n"
        "% SZS output end Proof for p\n";
    auto core = extract_core(out, five_axioms());
    CHECK(core.complete);
    CHECK(core.axioms == std::vector<std::string>{"ax2", "ax4"});
  }

  TEST_CASE("core from an E derivation") {
    std::string out =
        "# SZS status Theorem\n# SZS output start CNFRefutation\n"
        "fof(c_0_0, axiom, (p(ax3)), file('/tmp/p.p', ax3)).\n"
        "fof(c_0_1, conjecture, (q), file('/tmp/p.p', goal)).\n"
        "cnf(c_0_2, plain, ($false), inference(x, [status(thm)], [c_0_0, c_0_1])).\n"
        "# SZS output end CNFRefutation\n";
    auto core = extract_core(out, five_axioms());
    CHECK(core.axioms == std::vector<std::string>{"ax3"});
  }

  TEST_CASE("core from an SMT unsat core, quoted names included") {
    FofProblem p = five_axioms();
    p.formulas[0].name = "my axiom";
    auto core = extract_core("unsat\n(|my axiom| ax5_1\n goal)\n", p);
    CHECK(core.complete);
    CHECK(core.axioms == std::vector<std::string>{"my axiom", "ax5"});
  }

  TEST_CASE("core fallbacks") {
    std::string only_goal =
        "% SZS status Theorem\n% SZS output start Proof\n1. q [input goal]\n% SZS output end Proof\n";
    CHECK(extract_core(only_goal, five_axioms()).axioms.empty());
    auto none = extract_core("% SZS status Theorem\n", five_axioms());
    CHECK_FALSE(none.complete);
    CHECK(none.axioms.size() == 5);
  }

  TEST_CASE("cores are subsets of the submitted axioms") {
    gen::Rng rng(21);
    FofProblem p = five_axioms();
    std::vector<std::string> cited_pool = {"ax1", "ax2", "ax3", "ax4", "ax5", "goal", "unknown", "c_0_1"};
    for (int i = 0; i < 500; ++i) {
      std::string out = "% SZS status Theorem\n% SZS output start Proof\n";
      for (std::size_t n = rng.below(6); n > 0; --n) out += "1. x [input " + rng.pick(cited_pool) + "]\n";
      out += "% SZS output end Proof\n";
      auto names = p.axiom_names();
      for (const auto& a : extract_core(out, p).axioms)
        CHECK(std::find(names.begin(), names.end(), a) != names.end());
    }
  }
}
