#pragma once

#include <string>

#include "lowlux/image.hpp"

namespace lowlux {

/// Decode an 8-bit PNG or JPEG file into a 3-channel [0,1] image (values
/// divided by 255). Grayscale and palette files are expanded to RGB, alpha
/// is dropped. 16-bit files are rejected.
ImageF load_image(const std::string& path);

/// Encode round(clamp(pixel, 0, 1) * 255) as 8-bit RGB. The container is
/// chosen by extension: .jpg/.jpeg writes JPEG (quality 95), anything else
/// writes PNG.
void save_image(const ImageF& image, const std::string& path);

}  // namespace lowlux
