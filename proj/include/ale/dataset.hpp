#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ale/pool.hpp"

namespace ale {

// Two-class image population with shared nuisance structure: every class
// draws from the same texture modes (skewed frequencies), mode-specific
// brightness offsets, a mild per-image color cast, and pixel noise. The only
// class-dependent factor is a one-sided luminance band of width proportional
// to class_separation, so a learner must estimate the brightness residual
// after accounting for mode identity.
struct SyntheticSpec {
  long long n_samples = 600;
  int image_side = 32;
  int modes = 6;                 // texture modes shared by both classes
  double mode_falloff = 2.5;     // mode m has relative frequency falloff^-m
  double mode_offset = 0.06;     // outermost modes' luminance offset
  double class_separation = 0.3; // class luminance band spans 0.2 * this
  double noise_sigma = 0.04;     // per-pixel Gaussian noise
  std::uint64_t seed = 0;
};

struct DatasetBundle {
  std::vector<Sample> samples;
  std::unordered_map<SampleId, std::size_t> index_of;
  std::unordered_map<SampleId, int> truth;
  std::vector<SampleId> pool_ids;                // 70% stratified
  std::vector<std::pair<SampleId, int>> val;     // 10%
  std::vector<std::pair<SampleId, int>> test;    // 20%
  int num_classes = 2;

  const Image& image_of(SampleId id) const;
  int label_of(SampleId id) const;
  Oracle make_oracle() const;     // knows every pool label
  SamplePool make_pool() const;   // fresh, fully unlabeled
};

DatasetBundle generate_synthetic(const SyntheticSpec& spec);

// Manifest row: "id,path,label" with a header line; paths resolve relative
// to the manifest's directory.
struct ManifestEntry {
  SampleId id = 0;
  std::string path;
  int label = 0;
};

std::vector<ManifestEntry> read_manifest(const std::string& path);

// Assembles a bundle from three manifests (pool / val / test), decoding
// every referenced PNG.
DatasetBundle load_manifest_dataset(const std::string& pool_manifest,
                                    const std::string& val_manifest,
                                    const std::string& test_manifest);

// Writes images/<id>.png plus pool.csv, val.csv, test.csv under out_dir.
void write_dataset(const DatasetBundle& bundle, const std::string& out_dir);

}  // namespace ale
