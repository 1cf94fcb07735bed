#include "lowlux/image.hpp"

#include <stdexcept>

namespace lowlux {

ImageF::ImageF(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
        throw std::invalid_argument("ImageF: dimensions must be positive and channels 1 or 3");
    }
    data_.assign(pixels_per_plane() * static_cast<std::size_t>(channels), fill);
}

double mean_all(const ImageF& plane) {
    if (plane.empty()) return 0.0;
    double sum = 0.0;
    const double* p = plane.plane(0);
    const std::size_t n = plane.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) sum += p[i];
    return sum / static_cast<double>(n);
}

double mean_nonzero(const ImageF& plane) {
    if (plane.empty()) return 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    const double* p = plane.plane(0);
    const std::size_t n = plane.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] > 0.0) {
            sum += p[i];
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace lowlux
