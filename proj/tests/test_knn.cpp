#include <algorithm>
#include <map>

#include "doctest.h"
#include "gen.hpp"
#include "hammer/knn.hpp"

using namespace hammer;

namespace {

struct OracleNeighbor {
  std::size_t id, d2;
  double weight;
};

// All-pairs scan with std::set algorithms: candidates share a feature,
// ordered by distance then position.
std::vector<OracleNeighbor> oracle_knn(const std::vector<FeatureVec>& fs, const std::vector<std::size_t>& allowed,
                                       const FeatureVec& q, std::size_t k) {
  std::vector<OracleNeighbor> all;
  for (std::size_t id : allowed) {
    FeatureVec inter, sym;
    std::set_intersection(fs[id].begin(), fs[id].end(), q.begin(), q.end(), std::back_inserter(inter));
    if (inter.empty()) continue;
    std::set_symmetric_difference(fs[id].begin(), fs[id].end(), q.begin(), q.end(), std::back_inserter(sym));
    all.push_back({id, sym.size(), 1.0 / (1.0 + static_cast<double>(sym.size()))});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.id < b.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<std::pair<std::size_t, double>> oracle_rank(const std::vector<OracleNeighbor>& ns,
                                                        const std::vector<std::vector<std::size_t>>& deps,
                                                        const std::vector<std::size_t>& allowed, std::size_t limit) {
  std::map<std::size_t, double> rel;
  for (const auto& n : ns) {
    std::set<std::size_t> facts(deps[n.id].begin(), deps[n.id].end());
    facts.insert(n.id);
    for (std::size_t f : facts)
      if (std::find(allowed.begin(), allowed.end(), f) != allowed.end()) rel[f] += n.weight;
  }
  std::vector<std::pair<std::size_t, double>> out(rel.begin(), rel.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > limit) out.resize(limit);
  return out;
}

bool same(const std::vector<Neighbor>& got, const std::vector<OracleNeighbor>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i].id != want[i].id || got[i].d2 != want[i].d2 || got[i].weight != want[i].weight) return false;
  return true;
}

bool same(const std::vector<Ranked>& got, const std::vector<std::pair<std::size_t, double>>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i].id != want[i].first || got[i].relevance != want[i].second) return false;
  return true;
}

}  // namespace

TEST_SUITE("knn") {
  TEST_CASE("squared distance is the symmetric difference") {
    std::vector<FeatureVec> fs = {{0, 1, 2}, {1, 2, 3, 4}, {5}, {0, 1, 2}};
    FeatureIndex idx(fs, {0, 1, 2, 3});
    auto ns = idx.k_nearest({0, 1, 2}, 10);
    REQUIRE(ns.size() == 3);  // theorem 2 shares nothing
    CHECK(ns[0] == Neighbor{0, 0, 1.0});
    CHECK(ns[1] == Neighbor{3, 0, 1.0});
    CHECK(ns[2].id == 1);
    CHECK(ns[2].d2 == 3);
    CHECK(ns[2].weight == doctest::Approx(0.25));
    CHECK(idx.k_nearest({0, 1, 2}, 1).size() == 1);
    CHECK(idx.dimension() == 6);
    CHECK(idx.postings(1) == std::vector<std::size_t>{0, 1, 3});
  }

  TEST_CASE("index restricted to allowed positions") {
    std::vector<FeatureVec> fs = {{0}, {0}, {0}};
    FeatureIndex idx(fs, {0, 2});
    auto ns = idx.k_nearest({0}, 5);
    REQUIRE(ns.size() == 2);
    CHECK(ns[0].id == 0);
    CHECK(ns[1].id == 2);
  }

  TEST_CASE("unknown features count in the distance but match nothing") {
    FeatureSpace space;
    FeatureVec a = space.intern_all({"c:A", "c:B"});
    FeatureVec q = space.encode({"c:A", "c:Z"});
    CHECK(space.size() == 2);
    FeatureIndex idx({a}, {0});
    auto ns = idx.k_nearest(q, 5);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0].d2 == 2);
    CHECK(idx.k_nearest(space.encode({"c:Q"}), 5).empty());
  }

  TEST_CASE("rank_premises credits neighbours and their dependencies") {
    std::vector<Neighbor> ns = {{3, 0, 1.0}, {1, 1, 0.5}};
    std::vector<std::vector<std::size_t>> deps = {{}, {0}, {}, {0, 1, 2}};
    auto r = rank_premises(ns, deps, {0, 1, 2, 3}, 10);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == Ranked{0, 1.5});
    CHECK(r[1] == Ranked{1, 1.5});
    CHECK(r[2] == Ranked{2, 1.0});
    CHECK(r[3] == Ranked{3, 1.0});
    CHECK(rank_premises(ns, deps, {0, 2}, 10).size() == 2);
    CHECK(rank_premises(ns, deps, {0, 1, 2, 3}, 2).size() == 2);
  }

  TEST_CASE("indexed and naive agree exactly on random corpora") {
    gen::Rng rng(42);
    for (int round = 0; round < 150; ++round) {
      std::size_t n = 1 + rng.below(60);
      std::size_t dims = 1 + rng.below(40);
      auto fs = gen::random_features(rng, n, dims);
      std::vector<std::vector<std::size_t>> deps(n);
      for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = rng.below(4); j > 0; --j) deps[i].push_back(rng.below(i));
      for (auto& d : deps) {
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
      }
      std::size_t target = rng.below(n + 1);
      std::vector<std::size_t> allowed;
      for (std::size_t i = 0; i < target; ++i)
        if (rng.chance(0.8)) allowed.push_back(i);
      FeatureIndex idx(fs, allowed);
      std::vector<FeatureVec> queries;
      for (int qi = 0; qi < 10; ++qi) queries.push_back(gen::random_features(rng, 1, dims)[0]);
      std::size_t k = 1 + rng.below(50);
      auto batch = k_nearest_batch(idx, queries, k);
      for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        const auto& q = queries[qi];
        auto got = idx.k_nearest(q, k);
        auto naive = k_nearest_naive(fs, allowed, q, k);
        auto want = oracle_knn(fs, allowed, q, k);
        CHECK(got == naive);
        CHECK(same(got, want));
        CHECK(batch[qi] == got);
        std::size_t limit = 1 + rng.below(30);
        auto r = rank_premises(got, deps, allowed, limit);
        CHECK(r == rank_premises_naive(naive, deps, allowed, limit));
        CHECK(same(r, oracle_rank(want, deps, allowed, limit)));
      }
    }
  }
}
