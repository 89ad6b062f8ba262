#pragma once

#include <cstdint>

namespace ale {

// splitmix64 finalizer; decorrelates seeds derived from a common base.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic per-purpose seed: same (base, stream, step) always yields
// the same value, distinct purposes never share an RNG stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t step = 0) {
  return mix64(mix64(base ^ mix64(stream)) ^ step);
}

namespace streams {
constexpr std::uint64_t lsh_directions = 0x6c736864ULL;   // "lshd"
constexpr std::uint64_t lsh_fetch = 0x6c736866ULL;        // "lshf"
constexpr std::uint64_t init_labels = 0x696e6974ULL;      // "init"
constexpr std::uint64_t train_shuffle = 0x7472736eULL;    // "trsn"
constexpr std::uint64_t random_select = 0x72736c63ULL;    // "rslc"
constexpr std::uint64_t augmentation = 0x61756773ULL;     // "augs"
constexpr std::uint64_t classifier_init = 0x636c6669ULL;  // "clfi"
constexpr std::uint64_t compare_run = 0x636d7072ULL;      // "cmpr"
constexpr std::uint64_t round_train = 0x72747268ULL;      // "rtrh"
constexpr std::uint64_t round_selection = 0x72736c68ULL;  // "rslh"
constexpr std::uint64_t round_augment = 0x72617568ULL;    // "rauh"
constexpr std::uint64_t cold_start = 0x636f6c64ULL;       // "cold"
}  // namespace streams

}  // namespace ale
