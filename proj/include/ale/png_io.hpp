#pragma once

#include <string>

#include "ale/image.hpp"

namespace ale {

// 8-bit PNG decode; gray/palette/alpha inputs are expanded to RGB.
// Values are scaled to [0, 1].
Image read_png(const std::string& path);

// 8-bit RGB (or gray when channels == 1) encode with round-to-nearest.
void write_png(const std::string& path, const Image& img);

}  // namespace ale
