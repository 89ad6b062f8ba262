#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ale {

// Dense float image, row-major [y][x][c], values expected in [0, 1].
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  Image() = default;
  Image(int h, int w, int c, double fill = 0.0)
      : height(h), width(w), channels(c) {
    if (h <= 0 || w <= 0 || c <= 0) throw std::invalid_argument("bad image shape");
    data.assign(static_cast<std::size_t>(h) * w * c, fill);
  }

  double& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
  bool empty() const { return data.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * width;
  }
};

}  // namespace ale
