#include "ale/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ale/probes.hpp"
#include "ale/seeding.hpp"

namespace ale {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Linear-interpolated percentile of a sorted vector, numpy convention.
double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  double pos = (p / 100.0) * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

LSHIndex build_index(
    const std::unordered_map<SampleId, std::vector<double>>& features,
    int num_buckets, std::uint64_t seed) {
  probes::counters().lsh_build.fetch_add(1, std::memory_order_relaxed);
  if (features.empty()) throw std::invalid_argument("empty pool");
  if (num_buckets < 1) throw std::invalid_argument("bad bucket count");

  std::vector<SampleId> ids;
  ids.reserve(features.size());
  for (const auto& [id, vec] : features) {
    (void)vec;
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());

  std::size_t dim = features.at(ids[0]).size();
  if (dim == 0) throw std::invalid_argument("empty feature vector");
  for (SampleId id : ids)
    if (features.at(id).size() != dim)
      throw std::invalid_argument("inconsistent feature length");

  LSHIndex index;
  index.num_buckets = num_buckets;

  std::mt19937_64 rng(derive_seed(seed, streams::lsh_directions));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < LSHIndex::kNumDirections; ++j) {
    std::vector<double> dir(dim);
    double nn = 0.0;
    while (nn <= 1e-12) {
      for (double& x : dir) x = gauss(rng);
      nn = std::sqrt(dot(dir, dir));
    }
    for (double& x : dir) x /= nn;
    index.directions.push_back(std::move(dir));
  }

  // Pool every projection from every direction to set one shared width.
  std::vector<double> pooled;
  pooled.reserve(ids.size() * LSHIndex::kNumDirections);
  for (SampleId id : ids) {
    const auto& f = features.at(id);
    for (const auto& dir : index.directions) pooled.push_back(dot(dir, f));
  }
  std::sort(pooled.begin(), pooled.end());
  double span = percentile(pooled, 95.0) - percentile(pooled, 5.0);
  index.bucket_width = std::max(span / num_buckets, 1e-9);

  std::uniform_real_distribution<double> uni(0.0, index.bucket_width);
  index.offsets.resize(LSHIndex::kNumDirections);
  for (double& o : index.offsets) o = uni(rng);

  for (SampleId id : ids) index.assignment[id] = bucket_of(index, features.at(id));
  return index;
}

int bucket_of(const LSHIndex& index, const std::vector<double>& feature) {
  if (index.directions.empty()) throw std::logic_error("index not built");
  if (feature.size() != index.directions[0].size())
    throw std::invalid_argument("inconsistent feature length");

  // Combine per-direction codes with powers of 31, in unsigned arithmetic so
  // overflow wraps deterministically instead of being undefined.
  std::uint64_t acc = 0;
  std::uint64_t pow = 1;
  for (int j = 0; j < LSHIndex::kNumDirections; ++j) {
    double val = (dot(index.directions[j], feature) + index.offsets[j]) /
                 index.bucket_width;
    auto code = static_cast<std::int64_t>(std::floor(val));
    acc += static_cast<std::uint64_t>(code) * pow;
    pow *= 31ULL;
  }
  return static_cast<int>(acc % static_cast<std::uint64_t>(index.num_buckets));
}

std::vector<SampleId> uniform_fetch(const LSHIndex& index,
                                    const std::vector<SampleId>& candidates,
                                    std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<SampleId>> groups(index.num_buckets);
  for (SampleId id : candidates) {
    auto it = index.assignment.find(id);
    if (it == index.assignment.end())
      throw std::invalid_argument("candidate not indexed");
    groups[it->second].push_back(id);
  }

  std::mt19937_64 rng(derive_seed(seed, streams::lsh_fetch));
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    std::shuffle(g.begin(), g.end(), rng);
  }

  std::vector<SampleId> out;
  out.reserve(std::min(n, candidates.size()));
  std::vector<std::size_t> next(groups.size(), 0);
  bool progressed = true;
  while (out.size() < n && progressed) {
    progressed = false;
    for (std::size_t b = 0; b < groups.size() && out.size() < n; ++b) {
      if (next[b] < groups[b].size()) {
        out.push_back(groups[b][next[b]++]);
        progressed = true;
      }
    }
  }
  return out;
}

}  // namespace ale
