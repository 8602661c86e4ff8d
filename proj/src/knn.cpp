#include "hammer/knn.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace hammer {

std::uint32_t FeatureSpace::intern(const std::string& f) {
  auto [it, inserted] = ids_.try_emplace(f, static_cast<std::uint32_t>(names_.size()));
  if (inserted) names_.push_back(f);
  return it->second;
}

FeatureVec FeatureSpace::intern_all(const FeatureSet& fs) {
  FeatureVec v;
  v.reserve(fs.size());
  for (const auto& f : fs) v.push_back(intern(f));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

FeatureVec FeatureSpace::encode(const FeatureSet& fs) const {
  FeatureVec v;
  v.reserve(fs.size());
  std::uint32_t unknown = std::numeric_limits<std::uint32_t>::max();
  for (const auto& f : fs) {
    auto it = ids_.find(f);
    v.push_back(it != ids_.end() ? it->second : unknown--);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double inverse_distance_weight(std::size_t d2) { return 1.0 / (1.0 + static_cast<double>(d2)); }

namespace {

bool closer(const Neighbor& a, const Neighbor& b) { return a.d2 != b.d2 ? a.d2 < b.d2 : a.id < b.id; }

std::size_t overlap(const FeatureVec& a, const FeatureVec& b) {
  std::size_t n = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

FeatureIndex::FeatureIndex(const std::vector<FeatureVec>& features, const std::vector<std::size_t>& allowed)
    : ids_(allowed) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  sizes_.reserve(ids_.size());
  for (std::size_t slot = 0; slot < ids_.size(); ++slot) {
    const auto& fv = features.at(ids_[slot]);
    sizes_.push_back(fv.size());
    for (auto f : fv) postings_[f].push_back(static_cast<std::uint32_t>(slot));
  }
}

std::vector<std::size_t> FeatureIndex::postings(std::uint32_t f) const {
  std::vector<std::size_t> out;
  if (auto it = postings_.find(f); it != postings_.end())
    for (auto slot : it->second) out.push_back(ids_[slot]);
  return out;
}

std::vector<Neighbor> FeatureIndex::k_nearest(const FeatureVec& query, std::size_t k, WeightFn weight) const {
  std::vector<std::uint32_t> shared(ids_.size(), 0);
  std::vector<std::uint32_t> touched;
  for (auto f : query) {
    auto it = postings_.find(f);
    if (it == postings_.end()) continue;
    for (auto slot : it->second)
      if (shared[slot]++ == 0) touched.push_back(slot);
  }
  std::vector<Neighbor> cand;
  cand.reserve(touched.size());
  for (auto slot : touched) {
    std::size_t d2 = query.size() + sizes_[slot] - 2 * shared[slot];
    cand.push_back({ids_[slot], d2, 0.0});
  }
  std::size_t n = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(n), cand.end(), closer);
  cand.resize(n);
  for (auto& c : cand) c.weight = weight(c.d2);
  return cand;
}

std::vector<std::vector<Neighbor>> k_nearest_batch(const FeatureIndex& index, const std::vector<FeatureVec>& queries,
                                                   std::size_t k, WeightFn weight) {
  std::vector<std::vector<Neighbor>> out(queries.size());
  const long n = static_cast<long>(queries.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = index.k_nearest(queries[static_cast<std::size_t>(i)], k, weight);
  return out;
}

std::vector<Neighbor> k_nearest_naive(const std::vector<FeatureVec>& features, const std::vector<std::size_t>& allowed,
                                      const FeatureVec& query, std::size_t k, WeightFn weight) {
  std::set<std::size_t> ids(allowed.begin(), allowed.end());
  std::vector<Neighbor> all;
  for (std::size_t id : ids) {
    std::size_t common = overlap(features[id], query);
    if (common == 0) continue;
    all.push_back({id, features[id].size() + query.size() - 2 * common, 0.0});
  }
  std::stable_sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) { return a.d2 < b.d2; });
  if (all.size() > k) all.resize(k);
  for (auto& n : all) n.weight = weight(n.d2);
  return all;
}

namespace {

void sort_and_truncate(std::vector<Ranked>& out, std::size_t limit) {
  std::sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
    return a.relevance != b.relevance ? a.relevance > b.relevance : a.id < b.id;
  });
  if (out.size() > limit) out.resize(limit);
}

}  // namespace

std::vector<Ranked> rank_premises(const std::vector<Neighbor>& neighbors,
                                  const std::vector<std::vector<std::size_t>>& deps,
                                  const std::vector<std::size_t>& allowed, std::size_t limit) {
  std::unordered_map<std::size_t, double> rel;
  std::vector<std::size_t> order;
  auto allowed_id = [&](std::size_t id) { return std::binary_search(allowed.begin(), allowed.end(), id); };
  for (const auto& n : neighbors) {
    std::vector<std::size_t> facts = n.id < deps.size() ? deps[n.id] : std::vector<std::size_t>{};
    facts.push_back(n.id);
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    for (std::size_t f : facts) {
      if (!allowed_id(f)) continue;
      auto [it, inserted] = rel.try_emplace(f, 0.0);
      if (inserted) order.push_back(f);
      it->second += n.weight;
    }
  }
  std::vector<Ranked> out;
  out.reserve(order.size());
  for (std::size_t f : order) out.push_back({f, rel[f]});
  sort_and_truncate(out, limit);
  return out;
}

std::vector<Ranked> rank_premises_naive(const std::vector<Neighbor>& neighbors,
                                        const std::vector<std::vector<std::size_t>>& deps,
                                        const std::vector<std::size_t>& allowed, std::size_t limit) {
  std::vector<Ranked> out;
  for (std::size_t f : allowed) {
    double r = 0;
    bool used = false;
    for (const auto& n : neighbors) {
      bool hit = n.id == f;
      if (n.id < deps.size())
        for (std::size_t d : deps[n.id]) hit = hit || d == f;
      if (hit) {
        r += n.weight;
        used = true;
      }
    }
    if (used) out.push_back({f, r});
  }
  sort_and_truncate(out, limit);
  return out;
}

}  // namespace hammer
