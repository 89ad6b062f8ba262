#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ale/classifier.hpp"
#include "ale/pool.hpp"

namespace ale {

struct SelectionConfig {
  double gamma = 0.7;           // share of the round budget ranked by certainty
  double round_fraction = 0.10; // round budget as a fraction of the full pool
  int buckets = 10;             // LSH bucket count for the diversity half
  std::uint64_t seed = 0;
};

struct Budget {
  long long informative = 0;
  long long representative = 0;
  long long total() const { return informative + representative; }
};

struct SelectionRound {
  std::vector<SampleId> informative;
  std::vector<SampleId> representative;
  std::vector<SampleId> selected;  // informative then representative
  std::unordered_map<SampleId, int> buckets;  // LSH bucket per representative id
};

using FeatureMap = std::unordered_map<SampleId, std::vector<double>>;

// Splits round(round_fraction * total) into an informative part
// round(total_budget * gamma) and a representative remainder.
// gamma outside [0,1] or round_fraction outside (0,1] is an invalid fraction.
Budget budget(std::int64_t total_available, const SelectionConfig& config);

// n unlabeled ids with the lowest model certainty, ascending certainty,
// ties broken by ascending id.
std::vector<SampleId> select_informative(const SamplePool& pool,
                                         const ProbabilisticClassifier& model,
                                         const FeatureMap& features, long long n);

// n unlabeled ids with the highest prediction entropy, descending entropy,
// ties broken by ascending id.
std::vector<SampleId> select_entropy(const SamplePool& pool,
                                     const ProbabilisticClassifier& model,
                                     const FeatureMap& features, long long n);

// n unlabeled ids drawn uniformly without replacement.
std::vector<SampleId> select_random(const SamplePool& pool, long long n,
                                    std::uint64_t seed);

// n unlabeled ids spread across LSH buckets built over the given
// low-dimensional diversity features. Model-free by construction.
std::vector<SampleId> select_representative(const SamplePool& pool,
                                            const FeatureMap& diversity_features,
                                            const SelectionConfig& config,
                                            long long n);

// Full dual-criteria round: the informative slice first, then the
// representative slice drawn from the remaining unlabeled ids, so the two
// halves never overlap. When the representative fetch cannot fill its
// quota the shortfall stays unfilled (pool exhaustion).
SelectionRound select_round(const SamplePool& pool,
                            const ProbabilisticClassifier& model,
                            const FeatureMap& classifier_features,
                            const FeatureMap& diversity_features,
                            const SelectionConfig& config);

}  // namespace ale
