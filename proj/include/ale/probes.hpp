#pragma once

#include <atomic>
#include <cstdint>

namespace ale::probes {

// Call counters for observing which code paths an experiment exercised.
// Tests use these to prove strategy purity (e.g. a random-selection run
// never touches PCA, a plain selective-annotation run never stitches).
struct Counters {
  std::atomic<std::uint64_t> fit_pca{0};
  std::atomic<std::uint64_t> pca_project{0};
  std::atomic<std::uint64_t> lsh_build{0};
  std::atomic<std::uint64_t> stitch{0};
  std::atomic<std::uint64_t> mixup{0};
  std::atomic<std::uint64_t> geometric{0};
  std::atomic<std::uint64_t> selection_scoring{0};
};

Counters& counters();
void reset();

}  // namespace ale::probes
