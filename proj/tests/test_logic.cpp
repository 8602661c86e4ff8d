#include <functional>

#include "doctest.h"
#include "gen.hpp"
#include "hammer/syntax.hpp"

using namespace hammer;

namespace {

Signature toy_sig() {
  Signature sig;
  parse_tt(
      "tt(num, ty, $t).\n"
      "tt(ADD, ty, num > num > num).\n"
      "tt(SUC, ty, num > num).\n"
      "tt(MIN, ty, num > num > num).\n"
      "tt(0, ty, num).\n"
      "tt(a, ty, num).\n"
      "tt(b, ty, num).\n"
      "tt(f, ty, num > num > num).\n"
      "tt(g, ty, num > num).\n",
      sig);
  return sig;
}

// Conjuncts by direct recursion: leading universals accumulate, a
// conjunction splits, and a leaf keeps its own binders and is closed over
// the accumulated universals it uses. A formula that never splits is its
// own single conjunct.
void oracle_split(const Term& t, std::vector<Term> bound, std::vector<Term>& out) {
  std::vector<Term> inner;
  Term body = t;
  while (auto q = dest_quant(body, builtin::kForall)) {
    inner.push_back(q->first);
    body = q->second;
  }
  if (auto c = dest_binop(body, builtin::kAnd)) {
    bound.insert(bound.end(), inner.begin(), inner.end());
    oracle_split(c->first, bound, out);
    oracle_split(c->second, bound, out);
    return;
  }
  Term leaf = t;
  for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
    bool used = occurs_free(*it, leaf);
    for (auto jt = bound.rbegin(); jt != it; ++jt) used = used && !(*jt == *it);
    if (used) leaf = mk_quant(builtin::kForall, *it, leaf);
  }
  out.push_back(leaf);
}

}  // namespace

TEST_SUITE("logic") {
  TEST_CASE("beta_normalize examples") {
    Signature sig = toy_sig();
    Term a = parse_term("a", sig);
    CHECK(beta_normalize(parse_term("(^[x:num]: x) a", sig)) == a);
    CHECK(alpha_equal(beta_normalize(parse_term("(^[x:num]: f x x) a", sig)), parse_term("f a a", sig)));
    Term ga = parse_term("g a", sig);
    CHECK(beta_normalize(ga) == ga);
  }

  TEST_CASE("split_conjuncts of ADD_CLAUSES gives four conjuncts") {
    Signature sig = toy_sig();
    Term t = parse_term(
        "![m:num, n:num]: ((ADD 0 m = m) & ((ADD m 0 = m) & ((ADD (SUC m) n = SUC (ADD m n)) & "
        "(ADD m (SUC n) = SUC (ADD m n)))))",
        sig);
    auto cs = split_conjuncts(t);
    REQUIRE(cs.size() == 4);
    CHECK(alpha_equal(cs[0].term, parse_term("![m:num]: (ADD 0 m = m)", sig)));
    CHECK(alpha_equal(cs[1].term, parse_term("![m:num]: (ADD m 0 = m)", sig)));
    CHECK(alpha_equal(cs[2].term, parse_term("![m:num, n:num]: (ADD (SUC m) n = SUC (ADD m n))", sig)));
    CHECK(alpha_equal(cs[3].term, parse_term("![m:num, n:num]: (ADD m (SUC n) = SUC (ADD m n))", sig)));
    for (std::size_t i = 0; i < cs.size(); ++i) CHECK(cs[i].address.index == i + 1);
    CHECK(path_str(cs[0].address.path) == "L");
    CHECK(path_str(cs[3].address.path) == "RRR");
  }

  TEST_CASE("split_conjuncts distributes the quantifier of MIN_0") {
    Signature sig = toy_sig();
    auto cs = split_conjuncts(parse_term("![n:num]: ((MIN n 0 = 0) & (MIN 0 n = 0))", sig));
    REQUIRE(cs.size() == 2);
    CHECK(alpha_equal(cs[0].term, parse_term("![n:num]: (MIN n 0 = 0)", sig)));
    CHECK(alpha_equal(cs[1].term, parse_term("![n:num]: (MIN 0 n = 0)", sig)));
  }

  TEST_CASE("split_conjuncts leaves non-conjunctions and existentials alone") {
    Signature sig = toy_sig();
    Term eq = parse_term("a = b", sig);
    auto cs = split_conjuncts(eq);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].term == eq);
    CHECK(cs[0].address.path.empty());
    CHECK(split_conjuncts(parse_term("?[n:num]: ((n = a) & (n = b))", sig)).size() == 1);
    CHECK_THROWS_AS(split_conjuncts(parse_term("a", sig)), Error);
  }

  TEST_CASE("subterms examples") {
    Signature sig = toy_sig();
    Term x = Term::var("x", gen::num());
    auto s = subterms(x);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == x);

    Term g = sig.mk_const("g", {});
    Term gx = Term::app(g, x);
    s = subterms(gx);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == gx);
    CHECK(s[1] == g);
    CHECK(s[2] == x);

    Term lam = Term::abs(x, gx);
    s = subterms(lam);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == lam);
    CHECK(s[1] == x);
    CHECK(s[2] == gx);
    CHECK(s[3] == g);
  }

  TEST_CASE("subterms deduplicates alpha-equivalent terms") {
    Signature sig = toy_sig();
    auto s = subterms(parse_term("(^[x:num]: x) = (^[y:num]: y)", sig));
    int lambdas = 0;
    for (const auto& t : s) lambdas += t.is_abs();
    CHECK(lambdas == 1);
  }

  TEST_CASE("typecheck rejects ill-typed applications") {
    Signature sig = toy_sig();
    Term g = sig.mk_const("g", {});
    Term bad = Term::app(g, mk_truth(true));
    CHECK_THROWS_AS(typecheck(bad, sig), Error);
    CHECK_THROWS_AS(sig.mk_const("nope", {}), Error);
  }

  TEST_CASE("substitution avoids capture") {
    Signature sig = toy_sig();
    Term x = Term::var("x", gen::num()), y = Term::var("y", gen::num());
    Term t = Term::abs(y, mk_eq(x, y));  // \y. x = y
    Term r = subst(t, x, y);             // must not capture
    REQUIRE(r.is_abs());
    CHECK_FALSE(r.bvar() == y);
    CHECK(occurs_free(y, r));
  }

  TEST_CASE("properties over random terms") {
    Signature sig = gen::signature();
    gen::Rng rng(20261016);
    gen::TermGen tg(rng, sig);
    for (int i = 0; i < 500; ++i) {
      Term t = tg.statement(1 + static_cast<int>(i % 5));
      CAPTURE(print_term(t));
      Type ty = typecheck(t, sig);
      REQUIRE(ty.is_bool());

      Term b = beta_normalize(t);
      CHECK(beta_normalize(b) == b);
      CHECK(typecheck(b, sig) == ty);

      std::size_t counter = 0;
      Term r = gen::rename_bound(t, counter);
      CHECK(alpha_equal(t, r));
      CHECK(alpha_key(t) == alpha_key(r));

      auto cs = split_conjuncts(t);
      std::vector<Term> expect;
      oracle_split(t, {}, expect);
      REQUIRE(cs.size() == expect.size());
      for (std::size_t k = 0; k < cs.size(); ++k) {
        CHECK(cs[k].address.index == k + 1);
        CHECK(alpha_equal(cs[k].term, expect[k]));
        CHECK(typecheck(cs[k].term, sig).is_bool());
        CHECK(free_vars(cs[k].term).empty());
      }
    }
  }
}
