#pragma once

#include <vector>

#include "ale/image.hpp"

namespace ale {

// Principal directions of a centered sample set, strongest variance first.
struct PCABasis {
  std::vector<double> mean;
  std::vector<std::vector<double>> components;  // unit rows, mutually orthogonal
  std::vector<double> explained_variance;       // descending, >= 0

  int input_dim() const { return static_cast<int>(mean.size()); }
  int output_dim() const { return static_cast<int>(components.size()); }
};

struct PCAOptions {
  double tolerance = 1e-13;
  int max_iterations = 10000;
};

// Scales each channel so its mean matches the global mean, then clamps to [0,1].
// Requires 3 channels; a channel mean below 1e-12 is rejected.
Image gray_world_normalize(const Image& img);

// Bilinear interpolation with half-pixel centers and edge clamping.
// Preserves channel count; identity when the size is unchanged.
Image resize_bilinear(const Image& img, int out_height, int out_width);

// Grayscale (channel mean), resize to side x side, row-major flatten.
std::vector<double> to_feature_vector(const Image& img, int side);

// Top-d_out principal components via power iteration with deflation.
// The covariance divisor is count-1. Each component's largest-magnitude
// coordinate is made positive. Throws "zero variance" when every input
// vector is identical.
PCABasis fit_pca(const std::vector<std::vector<double>>& vectors, int d_out,
                 const PCAOptions& options = {});

std::vector<double> project(const PCABasis& basis, const std::vector<double>& v);

}  // namespace ale
