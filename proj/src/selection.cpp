#include "ale/selection.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "ale/hashing.hpp"
#include "ale/probes.hpp"
#include "ale/seeding.hpp"

namespace ale {

namespace {

// (score, id) ranking shared by the certainty and entropy criteria.
std::vector<SampleId> rank_unlabeled(
    const SamplePool& pool, const ProbabilisticClassifier& model,
    const FeatureMap& features, long long n, bool ascending) {
  if (n < 0) throw std::invalid_argument("bad selection size");
  probes::counters().selection_scoring.fetch_add(1, std::memory_order_relaxed);

  std::vector<std::pair<double, SampleId>> scored;
  scored.reserve(pool.unlabeled().size());
  for (SampleId id : pool.unlabeled()) {
    auto it = features.find(id);
    if (it == features.end()) throw std::invalid_argument("feature missing for id");
    double s = ascending ? model.certainty(it->second) : model.entropy(it->second);
    scored.emplace_back(s, id);
  }
  if (ascending) {
    std::sort(scored.begin(), scored.end());
  } else {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
  }
  std::size_t take = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(n));
  std::vector<SampleId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace

Budget budget(std::int64_t total_available, const SelectionConfig& config) {
  if (total_available <= 0) throw std::invalid_argument("empty pool");
  if (!(config.round_fraction > 0.0) || !(config.round_fraction <= 1.0))
    throw std::invalid_argument("invalid fraction");
  if (!(config.gamma >= 0.0) || !(config.gamma <= 1.0))
    throw std::invalid_argument("invalid fraction");

  long long total =
      round_half_up(config.round_fraction * static_cast<double>(total_available));
  long long informative = round_half_up(static_cast<double>(total) * config.gamma);
  Budget b;
  b.informative = informative;
  b.representative = total - informative;
  return b;
}

std::vector<SampleId> select_informative(const SamplePool& pool,
                                         const ProbabilisticClassifier& model,
                                         const FeatureMap& features, long long n) {
  return rank_unlabeled(pool, model, features, n, /*ascending=*/true);
}

std::vector<SampleId> select_entropy(const SamplePool& pool,
                                     const ProbabilisticClassifier& model,
                                     const FeatureMap& features, long long n) {
  return rank_unlabeled(pool, model, features, n, /*ascending=*/false);
}

std::vector<SampleId> select_random(const SamplePool& pool, long long n,
                                    std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("bad selection size");
  std::vector<SampleId> order = pool.unlabeled();  // sorted ascending
  std::mt19937_64 rng(derive_seed(seed, streams::random_select));
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(n)));
  return order;
}

std::vector<SampleId> select_representative(const SamplePool& pool,
                                            const FeatureMap& diversity_features,
                                            const SelectionConfig& config,
                                            long long n) {
  if (n < 0) throw std::invalid_argument("bad selection size");
  if (pool.unlabeled().empty() || n == 0) return {};
  FeatureMap unlabeled_features;
  unlabeled_features.reserve(pool.unlabeled().size());
  for (SampleId id : pool.unlabeled()) {
    auto it = diversity_features.find(id);
    if (it == diversity_features.end())
      throw std::invalid_argument("feature missing for id");
    unlabeled_features.emplace(id, it->second);
  }
  LSHIndex index = build_index(unlabeled_features, config.buckets, config.seed);
  return uniform_fetch(index, pool.unlabeled(), static_cast<std::size_t>(n),
                       config.seed);
}

SelectionRound select_round(const SamplePool& pool,
                            const ProbabilisticClassifier& model,
                            const FeatureMap& classifier_features,
                            const FeatureMap& diversity_features,
                            const SelectionConfig& config) {
  Budget b = budget(pool.total_available(), config);
  SelectionRound round;
  round.informative = select_informative(pool, model, classifier_features,
                                         b.informative);

  if (b.representative > 0 && !pool.unlabeled().empty()) {
    // Fetch order is computed over all unlabeled ids; members already taken
    // by the informative half are skipped, continuing the round robin. This
    // keeps the representative ordering identical to a standalone
    // select_representative call with the same seed.
    FeatureMap unlabeled_features;
    unlabeled_features.reserve(pool.unlabeled().size());
    for (SampleId id : pool.unlabeled()) {
      auto it = diversity_features.find(id);
      if (it == diversity_features.end())
        throw std::invalid_argument("feature missing for id");
      unlabeled_features.emplace(id, it->second);
    }
    LSHIndex index = build_index(unlabeled_features, config.buckets, config.seed);
    std::vector<SampleId> order = uniform_fetch(
        index, pool.unlabeled(), pool.unlabeled().size(), config.seed);

    std::unordered_set<SampleId> taken(round.informative.begin(),
                                       round.informative.end());
    for (SampleId id : order) {
      if (static_cast<long long>(round.representative.size()) >= b.representative)
        break;
      if (!taken.count(id)) {
        round.representative.push_back(id);
        round.buckets[id] = index.assignment.at(id);
      }
    }
  }

  round.selected = round.informative;
  round.selected.insert(round.selected.end(), round.representative.begin(),
                        round.representative.end());
  return round;
}

}  // namespace ale
