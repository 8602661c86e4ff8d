#include <functional>
#include <map>

#include "doctest.h"
#include "gen.hpp"
#include "hammer/depreco.hpp"

using namespace hammer;

namespace {

DepId id(const std::string& theory, std::size_t seq, std::vector<Side> path = {}) {
  return DepId{TheoremId{theory, seq}, std::move(path)};
}

Tag named(DepId d) {
  Tag t;
  t.dependency_id = std::move(d);
  return t;
}

Tag unnamed(DepTree tree) {
  Tag t;
  t.deps = std::move(tree);
  return t;
}

// Th0 = A & B, Th1 = C & (D & E) over propositional atoms.
struct Example {
  Signature sig;
  Term th0, th1;
  ConjunctLookup lookup;
  Example() {
    for (const char* a : {"A", "B", "C", "D", "E"}) sig.add_const(a, {{}, Type::boolean()});
    auto c = [&](const char* n) { return sig.mk_const(n, {}); };
    th0 = mk_binop(builtin::kAnd, c("A"), c("B"));
    th1 = mk_binop(builtin::kAnd, c("C"), mk_binop(builtin::kAnd, c("D"), c("E")));
    for (const auto& x : split_conjuncts(th0)) lookup[{"base", 0}].push_back(x.address);
    for (const auto& x : split_conjuncts(th1)) lookup[{"base", 1}].push_back(x.address);
  }
};

std::set<ConjunctId> cids(std::initializer_list<std::size_t> ks, std::size_t seq = 0) {
  std::set<ConjunctId> out;
  for (auto k : ks) out.insert({{"base", seq}, k});
  return out;
}

}  // namespace

TEST_SUITE("depreco") {
  TEST_CASE("passed_deps") {
    CHECK(passed_deps(named(id("T", 0))) == DepTree::leaf({id("T", 0)}));
    DepTree t = DepTree::node(DepTree::leaf({id("T", 0)}), DepTree::leaf({id("T", 1)}));
    CHECK(passed_deps(unnamed(t)) == t);
    CHECK(passed_deps(unnamed(DepTree::leaf())) == DepTree::leaf());
  }

  TEST_CASE("flatten") {
    DepId a = id("T", 0), b = id("T", 1);
    CHECK(flatten(DepTree::node(DepTree::leaf({a}), DepTree::leaf({b}))) == DepTree::leaf({a, b}));
    CHECK(flatten(DepTree::leaf({a})) == DepTree::leaf({a}));
    CHECK(flatten(DepTree::node(DepTree::node(DepTree::leaf({a}), DepTree::leaf({b})), DepTree::leaf({a}))) ==
          DepTree::leaf({a, b}));
  }

  TEST_CASE("step_tag CONJ keeps both passed trees") {
    DepId th0 = id("base", 0), th0c2 = id("base", 0, {Side::Right});
    Tag t = step_tag(Rule::Conj, {named(th0), named(th0c2)});
    CHECK_FALSE(t.dependency_id);
    CHECK(t.deps == DepTree::node(DepTree::leaf({th0}), DepTree::leaf({th0c2})));
  }

  TEST_CASE("step_tag CONJUNCT on trees and names") {
    DepTree l = DepTree::leaf({id("T", 0)}), r = DepTree::leaf({id("T", 1)});
    Tag t1 = step_tag(Rule::Conjunct1, {unnamed(DepTree::node(l, r))});
    CHECK(t1.deps == l);
    Tag t2 = step_tag(Rule::Conjunct2, {unnamed(DepTree::node(l, r))});
    CHECK(t2.deps == r);

    Tag n = step_tag(Rule::Conjunct2, {named(id("T", 3))});
    REQUIRE(n.dependency_id);
    CHECK(*n.dependency_id == id("T", 3, {Side::Right}));

    bool missing = false;
    Tag flat = step_tag(Rule::Conjunct1, {unnamed(DepTree::leaf({id("T", 0), id("T", 1)}))}, {}, &missing);
    CHECK(missing);
    CHECK(flat.deps == DepTree::leaf({id("T", 0), id("T", 1)}));
  }

  TEST_CASE("step_tag SUBST") {
    DepTree l = DepTree::leaf({id("T", 0)}), r = DepTree::leaf({id("T", 1)});
    Tag thm = unnamed(DepTree::node(l, r));
    Tag eq = named(id("T", 2));
    Tag pred = step_tag(Rule::Subst, {thm, eq}, {{"P", true}});
    CHECK(pred.deps == DepTree::leaf({id("T", 0), id("T", 1), id("T", 2)}));
    Tag term = step_tag(Rule::Subst, {thm, eq}, {{"x", false}});
    CHECK(term.deps == DepTree::node(DepTree::leaf({id("T", 0), id("T", 2)}), DepTree::leaf({id("T", 1), id("T", 2)})));
    CHECK_THROWS_AS(step_tag(Rule::Subst, {thm, eq}, {}), Error);
  }

  TEST_CASE("naming assigns sequence numbers per theory and stores the tree") {
    auto steps = parse_trace(
        "theory(T).\n"
        "step(s1, AXIOM, [], ax).\n"
        "step(s2, OTHER, [s1], none, A).\n"
        "step(s3, THM, [], A).\n"
        "step(s4, CONJ, [s3, s3], none, B).\n");
    Replayer r;
    r.run(steps);
    REQUIRE(r.named().size() == 2);
    CHECK(r.named()[0].id == TheoremId{"T", 0});
    CHECK(r.named()[1].id == TheoremId{"T", 1});
    CHECK(r.named()[0].axioms == std::set<std::string>{"ax"});
    CHECK(r.named()[1].tree == DepTree::node(DepTree::leaf({id("T", 0)}), DepTree::leaf({id("T", 0)})));
  }

  TEST_CASE("recover_conjunct_deps on the Th0/Th1 example") {
    Example ex;
    DepTree tree = DepTree::node(DepTree::leaf({id("base", 0)}), DepTree::leaf({id("base", 0, {Side::Left})}));
    auto rec = recover_conjunct_deps(ex.th1, tree, ex.lookup);
    REQUIRE(rec.size() == 3);
    CHECK(rec[0] == cids({1, 2}));
    CHECK(rec[1] == cids({1}));
    CHECK(rec[2] == cids({1}));
  }

  TEST_CASE("recover_conjunct_deps on a conjunction-free theorem") {
    Example ex;
    Term atom = ex.sig.mk_const("A", {});
    auto rec = recover_conjunct_deps(atom, DepTree::leaf({id("base", 0, {Side::Left})}), ex.lookup);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0] == cids({1}));
  }

  TEST_CASE("virtual conjunction merges into the closest real conjunct") {
    // Th0 = A & B named; a tree deeper than the statement (as after SPEC of
    // a universally quantified conjunction) addresses Th0_c1 at path LL.
    Example ex;
    DepTree deep = DepTree::node(DepTree::node(DepTree::leaf({id("base", 0, {Side::Left, Side::Left})}),
                                               DepTree::leaf({id("base", 0, {Side::Right})})),
                                 DepTree::leaf({id("base", 0, {Side::Right})}));
    auto rec = recover_conjunct_deps(ex.th0, deep, ex.lookup);
    REQUIRE(rec.size() == 2);
    CHECK(rec[0] == cids({1, 2}));  // both deep leaves merge into conjunct 1
    CHECK(rec[1] == cids({2}));
  }

  TEST_CASE("recovery rejects identifiers without conjuncts") {
    Example ex;
    CHECK_THROWS_AS(recover_conjunct_deps(ex.th0, DepTree::leaf({id("other", 0)}), ex.lookup), Error);
  }

  TEST_CASE("replaying the fixture trace gives the expected mapping") {
    Corpus c = load_corpus(HAMMER_FIXTURES "/recover");
    CHECK(replay_corpus_traces(c, HAMMER_FIXTURES "/recover") == 1);
    std::size_t th0 = *c.find("Th0"), th1 = *c.find("Th1");
    const auto& deps = c.theorem(th1).deps;
    REQUIRE(deps.size() == 3);
    CHECK(deps[0] == std::set<ConjunctRef>{{th0, 1}, {th0, 2}});
    CHECK(deps[1] == std::set<ConjunctRef>{{th0, 1}});
    CHECK(deps[2] == std::set<ConjunctRef>{{th0, 1}});
  }

  TEST_CASE("empty trace") {
    Replayer r;
    r.run(parse_trace(""));
    CHECK(r.named().empty());
  }

  TEST_CASE("trace errors") {
    CHECK_THROWS_AS(parse_trace("step(s1, FOO, [], none).\n"), Error);
    Replayer r;
    CHECK_THROWS_AS(r.run(parse_trace("step(s1, OTHER, [s0], none).\n")), Error);
    CHECK_THROWS_AS(r.run(parse_trace("step(s1, THM, [], Missing).\n")), Error);
  }

  TEST_CASE("traces of OTHER steps match a named-ancestor walk") {
    gen::Rng rng(5);
    for (int round = 0; round < 300; ++round) {
      std::string text = "theory(T).\n";
      std::size_t n = 1 + rng.below(30);
      std::vector<std::vector<std::size_t>> prem(n);
      std::vector<int> name_of(n, -1);  // naming index
      std::vector<int> thm_of(n, -1);   // THM steps: naming index referenced
      int names = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::string line;
        if (names > 0 && rng.chance(0.25)) {
          thm_of[i] = static_cast<int>(rng.below(static_cast<std::size_t>(names)));
          line = "step(s" + std::to_string(i) + ", THM, [], N" + std::to_string(thm_of[i]) + ")";
        } else {
          std::size_t m = i == 0 ? 0 : rng.below(4);
          std::string ps;
          for (std::size_t j = 0; j < m; ++j) {
            prem[i].push_back(rng.below(i));
            ps += (j ? ", s" : "s") + std::to_string(prem[i].back());
          }
          line = "step(s" + std::to_string(i) + ", OTHER, [" + ps + "], none";
          if (rng.chance(0.4)) {
            name_of[i] = names++;
            line += ", N" + std::to_string(name_of[i]);
          }
          line += ")";
        }
        text += line + ".\n";
      }
      // oracle: the identifiers a step passes on
      std::vector<std::set<std::size_t>> passes(n);
      std::map<int, std::set<std::size_t>> stored;
      for (std::size_t i = 0; i < n; ++i) {
        if (thm_of[i] >= 0) {
          passes[i] = {static_cast<std::size_t>(thm_of[i])};
          continue;
        }
        std::set<std::size_t> u;
        for (auto p : prem[i]) u.insert(passes[p].begin(), passes[p].end());
        if (name_of[i] >= 0) {
          stored[name_of[i]] = u;
          passes[i] = {static_cast<std::size_t>(name_of[i])};
        } else {
          passes[i] = u;
        }
      }
      Replayer r;
      r.run(parse_trace(text));
      REQUIRE(r.named().size() == stored.size());
      for (const auto& rec : r.named()) {
        std::set<DepId> expect;
        for (auto k : stored[static_cast<int>(rec.id.seq)]) expect.insert(id("T", k));
        CHECK(rec.tree.is_leaf());
        CHECK(rec.tree.ids == expect);
      }
    }
  }

  TEST_CASE("step_tag invents no identifiers and OTHER is already flat") {
    gen::Rng rng(11);
    std::function<DepTree(int)> tree = [&](int depth) {
      if (depth == 0 || rng.chance(0.4)) {
        std::set<DepId> ids;
        for (std::size_t j = rng.below(3); j > 0; --j) ids.insert(id("T", rng.below(6), {}));
        return DepTree::leaf(ids);
      }
      return DepTree::node(tree(depth - 1), tree(depth - 1));
    };
    const std::vector<Rule> rules = {Rule::Conj, Rule::Conjunct1, Rule::Conjunct2, Rule::Gen, Rule::Spec,
                                     Rule::Subst, Rule::Other};
    for (int round = 0; round < 1000; ++round) {
      Rule rule = rng.pick(rules);
      std::size_t arity = rule == Rule::Conj ? 2 : rule == Rule::Subst ? 1 + rng.below(3) : rule == Rule::Other ? rng.below(4) : 1;
      std::vector<Tag> ps;
      std::set<DepId> input;
      for (std::size_t j = 0; j < arity; ++j) {
        Tag t = rng.chance(0.3) ? named(id("T", 10 + rng.below(5))) : unnamed(tree(3));
        auto ids = all_ids(passed_deps(t));
        input.insert(ids.begin(), ids.end());
        ps.push_back(t);
      }
      std::vector<SubstVar> sv;
      if (rule == Rule::Subst)
        for (std::size_t j = 1; j < arity; ++j) sv.push_back({"v", rng.chance(0.5)});
      Tag out = step_tag(rule, ps, sv);
      for (const auto& d : all_ids(out.deps)) {
        bool known = input.count(d) > 0;
        // a CONJUNCT of a named premise extends its identifier
        if (!known && out.dependency_id) known = true;
        CHECK(known);
      }
      if (rule == Rule::Other) CHECK(flatten(out.deps) == out.deps);
    }
  }
}
