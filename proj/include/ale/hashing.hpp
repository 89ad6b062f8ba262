#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ale/pool.hpp"

namespace ale {

// p-stable locality-sensitive hash over low-dimensional feature vectors.
// Each of the 4 unit-norm Gaussian directions quantizes the projected value
// into an integer code; codes combine into one of num_buckets buckets.
struct LSHIndex {
  std::vector<std::vector<double>> directions;  // unit rows
  std::vector<double> offsets;                  // one per direction, in [0, width)
  double bucket_width = 0.0;
  int num_buckets = 0;
  std::unordered_map<SampleId, int> assignment;

  static constexpr int kNumDirections = 4;
};

// Builds the index for every (id, feature) pair. The bucket width is the
// 5th-to-95th percentile span of all pooled projections divided by
// num_buckets, floored at 1e-9; offsets are drawn after the width is known.
LSHIndex build_index(
    const std::unordered_map<SampleId, std::vector<double>>& features,
    int num_buckets, std::uint64_t seed);

// Bucket for an arbitrary vector under an existing index.
int bucket_of(const LSHIndex& index, const std::vector<double>& feature);

// Up to n distinct ids spread evenly across buckets: visits buckets in
// ascending bucket order round-robin, consuming each bucket's candidates in
// seeded-shuffled order. Returns fewer than n only when candidates run out.
std::vector<SampleId> uniform_fetch(const LSHIndex& index,
                                    const std::vector<SampleId>& candidates,
                                    std::size_t n, std::uint64_t seed);

}  // namespace ale
