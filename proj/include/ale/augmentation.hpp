#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ale/image.hpp"
#include "ale/pool.hpp"

namespace ale {

// Synthesized training sample: an image plus a target distribution over
// classes (one-hot for label-preserving ops, mixed for mixup).
struct AugmentedSample {
  Image image;
  std::vector<double> target;
  SampleId anchor = -1;
};

// Tiles [tl tr; bl br] into a double-size composite, then resizes back to
// the tile resolution. All four tiles must share one shape.
Image stitch_2x2(const Image& tl, const Image& tr, const Image& bl,
                 const Image& br);

// Shape-matched control: the same tile-and-resize pipeline fed four copies
// of one image.
Image replicate_4(const Image& img);

// Pixel blend lambda*a + (1-lambda)*b with the matching soft target over
// num_classes. lambda must lie in [0,1].
AugmentedSample mixup(const Image& a, int label_a, const Image& b, int label_b,
                      double lambda, int num_classes);

struct GeometricParams {
  double rotation_deg = 0.0;  // U[-90, 90]
  double shear_deg = 0.0;     // U[-20, 20]
  double scale = 1.0;         // U[0.8, 1.2]
  bool flip_horizontal = false;
  bool flip_vertical = false;
};

GeometricParams draw_geometric_params(std::uint64_t seed);

// Rotation, then shear, then scale, composed into a single affine map about
// the image center and resampled once (inverse mapping, bilinear, edge
// replication); exact flips afterwards.
Image geometric_augment(const Image& img, const GeometricParams& params);
Image geometric_augment(const Image& img, std::uint64_t seed);

// One stitched sample per labeled anchor, in annotation order. The three
// companions are drawn with replacement from the anchor's own class (the
// anchor itself is eligible); the target stays the anchor's hard label.
std::vector<AugmentedSample> build_aggregated_set(
    const SamplePool& pool, const std::unordered_map<SampleId, Image>& images,
    std::uint64_t seed);

// One mixup sample per labeled anchor: partner uniform over all labeled
// ids, lambda ~ Beta(alpha, alpha).
std::vector<AugmentedSample> build_mixup_set(
    const SamplePool& pool, const std::unordered_map<SampleId, Image>& images,
    double alpha, std::uint64_t seed);

}  // namespace ale
