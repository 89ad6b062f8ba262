#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ale/image.hpp"

namespace ale {

using SampleId = std::int64_t;

struct Sample {
  SampleId id = 0;
  Image image;
};

// Ground-truth label store; the learner only sees labels for ids it paid for.
class Oracle {
 public:
  Oracle() = default;

  void set(SampleId id, int label) { labels_[id] = label; }
  bool knows(SampleId id) const { return labels_.count(id) != 0; }
  int label_of(SampleId id) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<SampleId, int> labels_;
};

// Tracks which pool ids are labeled vs unlabeled. Unlabeled ids are kept
// sorted ascending; labeled pairs keep annotation order.
class SamplePool {
 public:
  SamplePool(std::vector<SampleId> ids, int num_classes);

  const std::vector<SampleId>& unlabeled() const { return unlabeled_; }
  const std::vector<std::pair<SampleId, int>>& labeled() const { return labeled_; }
  int num_classes() const { return num_classes_; }
  std::int64_t total_available() const { return total_available_; }

  bool is_unlabeled(SampleId id) const { return unlabeled_set_.count(id) != 0; }
  bool is_labeled(SampleId id) const { return labeled_set_.count(id) != 0; }
  int label_of(SampleId id) const;

  // Count of labeled samples per class, indexed by class id.
  std::vector<long long> class_counts() const;

  // Moves ids from unlabeled to labeled, attaching oracle labels.
  // Rejects the whole batch if any id is unknown, already labeled, or
  // duplicated within the batch.
  void annotate(const std::vector<SampleId>& ids, const Oracle& oracle);

  // Seeds the labeled set with round(fraction * N) uniformly chosen ids.
  void init_random(double fraction, std::uint64_t seed, const Oracle& oracle);

 private:
  std::vector<SampleId> unlabeled_;
  std::unordered_set<SampleId> unlabeled_set_;
  std::vector<std::pair<SampleId, int>> labeled_;
  std::unordered_map<SampleId, int> labeled_map_;
  std::unordered_set<SampleId> labeled_set_;
  int num_classes_ = 0;
  std::int64_t total_available_ = 0;
};

// round-half-away-from-zero, which is round-half-up for non-negatives
long long round_half_up(double x);

}  // namespace ale
