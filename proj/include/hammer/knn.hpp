#pragma once

// Modified k-nearest-neighbours premise ranking.
//
// Feature vectors are binary, so the squared Euclidean distance between two
// theorems is the size of the symmetric difference of their feature sets.
// Only theorems sharing at least one feature with the query are candidates.
// Each neighbour j contributes its weight to itself and to each of its
// dependencies; premises are ranked by the summed weights.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hammer/features.hpp"

namespace hammer {

using FeatureVec = std::vector<std::uint32_t>;  // sorted feature ids

// Interns feature strings. Features unknown to the space encode to ids
// that no theorem carries.
class FeatureSpace {
 public:
  std::uint32_t intern(const std::string& f);
  FeatureVec intern_all(const FeatureSet& fs);
  FeatureVec encode(const FeatureSet& fs) const;
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::uint32_t id) const { return names_.at(id); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

struct Neighbor {
  std::size_t id = 0;  // build-order position
  std::size_t d2 = 0;  // squared distance
  double weight = 0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

using WeightFn = double (*)(std::size_t d2);
// Default neighbour weight 1 / (1 + d2).
double inverse_distance_weight(std::size_t d2);

inline constexpr std::size_t kDefaultK = 40;

class FeatureIndex {
 public:
  // Indexes exactly the `allowed` positions (ascending) of `features`.
  FeatureIndex(const std::vector<FeatureVec>& features, const std::vector<std::size_t>& allowed);

  const std::vector<std::size_t>& ids() const { return ids_; }
  // Positions carrying feature `f`, ascending.
  std::vector<std::size_t> postings(std::uint32_t f) const;
  // Number of distinct features among the indexed theorems.
  std::size_t dimension() const { return postings_.size(); }

  std::vector<Neighbor> k_nearest(const FeatureVec& query, std::size_t k,
                                  WeightFn weight = inverse_distance_weight) const;

 private:
  std::vector<std::size_t> ids_;
  std::vector<std::size_t> sizes_;  // feature count per slot
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> postings_;  // feature -> slots
};

// Parallel over queries (OpenMP).
std::vector<std::vector<Neighbor>> k_nearest_batch(const FeatureIndex& index, const std::vector<FeatureVec>& queries,
                                                   std::size_t k, WeightFn weight = inverse_distance_weight);

// Serial all-pairs reference for FeatureIndex::k_nearest.
std::vector<Neighbor> k_nearest_naive(const std::vector<FeatureVec>& features, const std::vector<std::size_t>& allowed,
                                      const FeatureVec& query, std::size_t k,
                                      WeightFn weight = inverse_distance_weight);

struct Ranked {
  std::size_t id = 0;
  double relevance = 0;
  friend bool operator==(const Ranked&, const Ranked&) = default;
};

// relevance(f) = sum of w_j over neighbours j with f in deps[j] or f == j,
// restricted to `allowed` (ascending); sorted by relevance, then position;
// at most `limit` entries.
std::vector<Ranked> rank_premises(const std::vector<Neighbor>& neighbors,
                                  const std::vector<std::vector<std::size_t>>& deps,
                                  const std::vector<std::size_t>& allowed, std::size_t limit);

// Reference for rank_premises: scans every allowed fact against every neighbour.
std::vector<Ranked> rank_premises_naive(const std::vector<Neighbor>& neighbors,
                                        const std::vector<std::vector<std::size_t>>& deps,
                                        const std::vector<std::size_t>& allowed, std::size_t limit);

}  // namespace hammer
