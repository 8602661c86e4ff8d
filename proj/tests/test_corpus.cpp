#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gen.hpp"
#include "hammer/corpus.hpp"
#include "hammer/depreco.hpp"

using namespace hammer;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Transitive dependencies bottom-up in build order: the closure of i is
// its direct dependencies together with their closures.
std::vector<std::set<std::size_t>> closure_oracle(const Corpus& c) {
  std::vector<std::set<std::size_t>> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& deps : c.theorem(i).deps)
      for (const auto& r : deps) {
        out[i].insert(r.theorem);
        out[i].insert(out[r.theorem].begin(), out[r.theorem].end());
      }
  return out;
}

// Theory reachability by Warshall over the ancestor relation.
std::set<std::string> loaded_oracle(const Corpus& c, const std::string& theory) {
  const auto& ts = c.theories();
  std::size_t n = ts.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[ts[i]] = i;
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (const auto& p : c.parents(ts[i])) reach[i][pos[p]] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  std::set<std::string> out;
  for (std::size_t j = 0; j < n; ++j)
    if (reach[pos[theory]][j]) out.insert(ts[j]);
  return out;
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Corpus list_example_corpus() {
  Corpus c;
  c.add_theory("list", {});
  c.load_tt("list", read_file(HAMMER_FIXTURES "/list_example.tt"));
  return c;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("rename_overwritten examples") {
    TheoremId id1{"T", 0}, id2{"T", 1};
    auto m = rename_overwritten({{"T", id1}});
    CHECK(m == std::map<TheoremId, std::string>{{id1, "T"}});
    m = rename_overwritten({{"T", id1}, {"T", id2}});
    CHECK(m == std::map<TheoremId, std::string>{{id1, "T~1"}, {id2, "T"}});
    m = rename_overwritten({{"T", id1}, {"U", id2}});
    CHECK(m == std::map<TheoremId, std::string>{{id1, "T"}, {id2, "U"}});
  }

  TEST_CASE("overwritten theorems keep distinct names and resolve to the latest") {
    Corpus c;
    c.add_theory("th", {});
    c.load_tt("th", "tt(a, ty, $o).\ntt(T, ax, a).\ntt(T, ax, (a => a)).\n");
    REQUIRE(c.size() == 2);
    CHECK(c.theorem(0).name == "T~1");
    CHECK(c.theorem(1).name == "T");
    CHECK(c.theorem(0).original_name == "T");
    CHECK(c.find("T") == std::optional<std::size_t>(1));
    CHECK(c.find("T", 1) == std::optional<std::size_t>(0));
  }

  TEST_CASE("qualify renames with namespace and theory, idempotently and injectively") {
    Corpus c = list_example_corpus();
    Corpus q = qualify(c, "h4");
    const ConstInfo* hd = q.sig.find_const("h4/list/HD");
    REQUIRE(hd != nullptr);
    CHECK(q.sig.find_const("HD") == nullptr);
    CHECK(q.theorem(0).name == "h4/list/HD0");
    CHECK(hd->type == Type::fun(Type::app("h4/list/list", {Type::var("A")}), Type::var("A")));
    Corpus qq = qualify(q, "h4");
    CHECK(qq.tt_text("list") == q.tt_text("list"));

    Corpus two;
    two.add_theory("a", {});
    two.add_theory("b", {"a"});
    two.load_tt("a", "tt(p, ty, $o).\ntt(T, ax, p).\n");
    two.load_tt("b", "tt(T, ax, (p => p)).\n");
    Corpus q2 = qualify(two, "ns");
    CHECK(q2.theorem(0).name == "ns/a/T");
    CHECK(q2.theorem(1).name == "ns/b/T");
  }

  TEST_CASE("toy corpus files print back to their own entries") {
    Corpus c = load_corpus(HAMMER_SOURCE_DIR "/data/toy");
    for (const auto& th : c.theories()) {
      std::string src = read_file(fs::path(HAMMER_SOURCE_DIR "/data/toy") / (th + ".tt"));
      std::string stripped;
      std::istringstream in(src);
      for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '%') stripped += line + "\n";
      CHECK(c.tt_text(th) == stripped);
    }
  }

  TEST_CASE("save and load round trip") {
    Corpus c = load_corpus(HAMMER_SOURCE_DIR "/data/toy");
    fs::path dir = fs::temp_directory_path() / "hammer_corpus_rt";
    fs::remove_all(dir);
    save_corpus(c, dir);
    Corpus d = load_corpus(dir);
    REQUIRE(d.size() == c.size());
    CHECK(d.thy_text() == c.thy_text());
    for (const auto& th : c.theories()) {
      CHECK(d.tt_text(th) == c.tt_text(th));
      CHECK(d.deps_text(th) == c.deps_text(th));
    }
    fs::remove_all(dir);
  }

  TEST_CASE("dependency names resolve per conjunct") {
    Corpus c = load_corpus(HAMMER_SOURCE_DIR "/data/toy");
    auto pos = c.find("ADD_CLAUSES");
    REQUIRE(pos);
    CHECK(c.theorem(*pos).conjuncts.size() == 4);
    CHECK(c.resolve("ADD_CLAUSES").size() == 4);
    CHECK(c.resolve("ADD_CLAUSES_c2") == std::vector<ConjunctRef>{{*pos, 2}});
    CHECK(c.conjunct_name({*pos, 3}) == "ADD_CLAUSES_c3");
    CHECK_THROWS_AS(c.resolve("ADD_CLAUSES_c5"), Error);
    CHECK_THROWS_AS(c.resolve("NO_SUCH"), Error);
  }

  TEST_CASE("exact dependencies of the recovered example") {
    Corpus c = load_corpus(HAMMER_FIXTURES "/recover");
    replay_corpus_traces(c, HAMMER_FIXTURES "/recover");
    auto th1 = c.find("Th1");
    REQUIRE(th1);
    CHECK(accessible_set(c, *th1, AccessRelation::ExactDeps) == std::vector<std::size_t>{*c.find("Th0")});
  }

  TEST_CASE("chain A <- B <- C") {
    Corpus c;
    c.add_theory("t", {});
    c.load_tt("t", "tt(p, ty, $o).\ntt(A, ax, p).\ntt(B, ax, p).\ntt(C, ax, p).\n");
    c.load_deps("t", "deps(B, [A]).\ndeps(C, [B]).\n");
    CHECK(accessible_set(c, 2, AccessRelation::ExactDeps) == std::vector<std::size_t>{1});
    CHECK(accessible_set(c, 2, AccessRelation::TransitiveDeps) == std::vector<std::size_t>{0, 1});
    CHECK(accessible_set(c, 2, AccessRelation::LinearOrder) == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("toy corpus loaded theories match a reachability oracle") {
    Corpus c = load_corpus(HAMMER_SOURCE_DIR "/data/toy");
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto loaded = loaded_oracle(c, c.theorem(i).id.theory);
      std::vector<std::size_t> expect;
      for (std::size_t j = 0; j < i; ++j)
        if (loaded.count(c.theorem(j).id.theory)) expect.push_back(j);
      CHECK(accessible_set(c, i, AccessRelation::LoadedTheories) == expect);
    }
  }

  TEST_CASE("dependencies on later theorems are rejected") {
    Corpus c;
    c.add_theory("t", {});
    c.load_tt("t", "tt(p, ty, $o).\ntt(A, ax, p).\ntt(B, ax, p).\n");
    CHECK_THROWS_AS(c.set_deps(0, 1, {{1, 1}}), Error);
    CHECK_THROWS_AS(c.add_theory("u", {"nope"}), Error);
  }

  TEST_CASE("relations on random corpora") {
    gen::Rng rng(99);
    for (int round = 0; round < 200; ++round) {
      auto rc = gen::random_corpus(rng);
      const Corpus& c = rc.corpus;
      auto closure = closure_oracle(c);
      auto order = linear_order(c);
      REQUIRE(order.size() == c.size());
      std::vector<std::size_t> where(c.size());
      for (std::size_t k = 0; k < order.size(); ++k) where[order[k]] = k;
      for (std::size_t i = 0; i < c.size(); ++i) {
        auto ed = accessible_set(c, i, AccessRelation::ExactDeps);
        auto td = accessible_set(c, i, AccessRelation::TransitiveDeps);
        auto lt = accessible_set(c, i, AccessRelation::LoadedTheories);
        auto lo = accessible_set(c, i, AccessRelation::LinearOrder);
        CHECK(ed == rc.deps[i]);
        CHECK(subset(ed, td));
        CHECK(subset(td, lo));
        CHECK(subset(lt, lo));
        CHECK(td == std::vector<std::size_t>(closure[i].begin(), closure[i].end()));
        for (std::size_t d : td) CHECK(where[d] < where[i]);
      }
    }
  }
}
