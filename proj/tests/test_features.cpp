#include <algorithm>
#include <functional>

#include "doctest.h"
#include "gen.hpp"
#include "hammer/features.hpp"
#include "hammer/syntax.hpp"

using namespace hammer;

namespace {

Signature hd_sig() {
  Signature sig;
  parse_tt(
      "tt(list, ty, $t > $t).\n"
      "tt(int, ty, $t).\n"
      "tt(HD, ty, ![A:$t]: (list A > A)).\n"
      "tt(CONS, ty, ![A:$t]: (A > list A > list A)).\n"
      "tt(NIL, ty, ![A:$t]: (list A)).\n",
      sig);
  return sig;
}

bool has(const FeatureSet& fs, const std::string& f) { return std::binary_search(fs.begin(), fs.end(), f); }

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("normalize_print examples") {
    Signature sig = hd_sig();
    Term n = Term::var("n", Type::app("int"));
    Term t = Term::var("t", Type::app("list", {Type::app("int")}));
    Term hd = Term::app(sig.mk_const("HD", {Type::app("int")}),
                        Term::app(Term::app(sig.mk_const("CONS", {Type::app("int")}), n), t));
    CHECK(normalize_print(hd, NormScheme::OneVar) == "(HD (CONS X X))");
    CHECK(normalize_print(n, NormScheme::TypeOfVar) == "int");
    CHECK(normalize_print(hd, NormScheme::TypeOfVar) == "(HD (CONS int (list int)))");
    CHECK(normalize_print(hd, NormScheme::DeBruijn) == "(HD (CONS #0 #1))");
  }

  TEST_CASE("de Bruijn numbering of bound and free variables") {
    Signature sig = hd_sig();
    Term stmt = parse_term("![n:int, t:(list int)]: ((HD int) ((CONS int) n t) = n)", sig);
    std::string s = normalize_print(stmt, NormScheme::DeBruijn);
    CHECK(s.find("(HD (CONS #1 #0))") != std::string::npos);
    CHECK(s.find("#2") == std::string::npos);
  }

  TEST_CASE("extract on the HD example") {
    Signature sig = hd_sig();
    FeatureSet fs = extract(parse_term("![n:int, t:(list int)]: ((HD int) ((CONS int) n t) = n)", sig));
    CHECK(has(fs, "c:HD"));
    CHECK(has(fs, "c:CONS"));
    CHECK(has(fs, "t:int"));
    CHECK(has(fs, "t:list"));
    CHECK(has(fs, "s:(HD (CONS X X))"));
    CHECK(has(fs, "c:="));
    CHECK(has(fs, "c:!"));
  }

  TEST_CASE("type variables become v:A") {
    Signature sig = hd_sig();
    FeatureSet fs = extract(parse_term("![B:$t]: (![x:B]: ((HD B) ((CONS B) x (NIL B)) = x))", sig));
    CHECK(has(fs, "v:A"));
    CHECK_FALSE(has(fs, "v:B"));
    CHECK(has(fs, "s:A"));
  }

  TEST_CASE("fea round trip") {
    std::vector<FeatureSet> fss = {{"c:HD", "s:(HD X)"}, {}, {"t:list"}};
    std::vector<std::string> names = {"A", "B c", "C"};
    auto parsed = parse_fea(print_fea(names, fss));
    REQUIRE(parsed.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(parsed[i].first == names[i]);
      CHECK(parsed[i].second == fss[i]);
    }
  }

  TEST_CASE("properties over random statements") {
    Signature sig = gen::signature();
    gen::Rng rng(3);
    gen::TermGen tg(rng, sig);
    std::vector<Term> stmts;
    for (int i = 0; i < 400; ++i) {
      Term t = tg.statement(1 + i % 5);
      stmts.push_back(t);
      CAPTURE(print_term(t));
      FeatureSet fs = extract(t);
      CHECK(std::is_sorted(fs.begin(), fs.end()));
      CHECK(std::adjacent_find(fs.begin(), fs.end()) == fs.end());
      CHECK_FALSE(fs.empty());
      for (const auto& f : fs) {
        std::string p = f.substr(0, 2);
        CHECK((p == "t:" || p == "v:" || p == "c:" || p == "s:"));
      }

      std::size_t counter = 0;
      CHECK(extract(gen::rename_bound(t, counter)) == fs);
      CHECK(extract(t) == fs);

      for (auto scheme : {NormScheme::OneVar, NormScheme::DeBruijn, NormScheme::TypeOfVar}) {
        FeatureSet one = extract(t, scheme);
        CHECK(std::includes(fs.begin(), fs.end(), one.begin(), one.end()));
      }

      std::vector<std::string> consts, ctors, tvs;
      std::function<void(const Type&)> walk_type = [&](const Type& ty) { collect_type_ctors(ty, ctors); };
      std::function<void(const Term&)> walk = [&](const Term& u) {
        switch (u.kind()) {
          case Term::Kind::Var: walk_type(u.type()); break;
          case Term::Kind::Const: consts.push_back(u.name()); walk_type(u.type()); break;
          case Term::Kind::App: walk(u.fun()); walk(u.arg()); break;
          case Term::Kind::Abs: walk(u.bvar()); walk(u.body()); break;
        }
      };
      walk(t);
      collect_type_vars(t, tvs);
      auto distinct = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
      };
      CHECK(fs.size() <= 3 * subterms(t).size() + distinct(consts) + distinct(ctors) + distinct(tvs));
    }
    CHECK(extract_all(stmts) == extract_all_serial(stmts));
  }
}
