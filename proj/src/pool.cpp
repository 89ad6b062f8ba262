#include "ale/pool.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ale/seeding.hpp"

namespace ale {

long long round_half_up(double x) { return std::llround(x); }

int Oracle::label_of(SampleId id) const {
  auto it = labels_.find(id);
  if (it == labels_.end()) throw std::out_of_range("invalid annotation target");
  return it->second;
}

SamplePool::SamplePool(std::vector<SampleId> ids, int num_classes)
    : unlabeled_(std::move(ids)), num_classes_(num_classes) {
  if (unlabeled_.empty()) throw std::invalid_argument("empty pool");
  if (num_classes_ < 2) throw std::invalid_argument("need at least two classes");
  std::sort(unlabeled_.begin(), unlabeled_.end());
  if (std::adjacent_find(unlabeled_.begin(), unlabeled_.end()) != unlabeled_.end())
    throw std::invalid_argument("duplicate sample id");
  unlabeled_set_.insert(unlabeled_.begin(), unlabeled_.end());
  total_available_ = static_cast<std::int64_t>(unlabeled_.size());
}

int SamplePool::label_of(SampleId id) const {
  auto it = labeled_map_.find(id);
  if (it == labeled_map_.end()) throw std::out_of_range("id not labeled");
  return it->second;
}

std::vector<long long> SamplePool::class_counts() const {
  std::vector<long long> counts(num_classes_, 0);
  for (const auto& [id, label] : labeled_) {
    (void)id;
    counts.at(label) += 1;
  }
  return counts;
}

void SamplePool::annotate(const std::vector<SampleId>& ids, const Oracle& oracle) {
  std::unordered_set<SampleId> batch;
  for (SampleId id : ids) {
    if (!unlabeled_set_.count(id) || !batch.insert(id).second || !oracle.knows(id))
      throw std::invalid_argument("invalid annotation target");
  }
  for (SampleId id : ids) {
    int label = oracle.label_of(id);
    if (label < 0 || label >= num_classes_)
      throw std::invalid_argument("invalid annotation target");
    unlabeled_set_.erase(id);
    labeled_.emplace_back(id, label);
    labeled_map_.emplace(id, label);
    labeled_set_.insert(id);
  }
  std::erase_if(unlabeled_, [&](SampleId id) { return labeled_set_.count(id) != 0; });
}

void SamplePool::init_random(double fraction, std::uint64_t seed, const Oracle& oracle) {
  if (!(fraction > 0.0) || !(fraction <= 1.0)) throw std::invalid_argument("invalid fraction");
  long long k = round_half_up(fraction * static_cast<double>(total_available_));
  k = std::min<long long>(k, static_cast<long long>(unlabeled_.size()));

  std::vector<SampleId> order = unlabeled_;  // already sorted ascending
  std::mt19937_64 rng(derive_seed(seed, streams::init_labels));
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  annotate(order, oracle);
}

}  // namespace ale
