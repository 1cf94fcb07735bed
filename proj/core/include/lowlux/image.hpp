#pragma once

#include <cstddef>
#include <vector>

namespace lowlux {

/// Planar floating-point image. Planes are stored back to back, each plane
/// row-major. RGB/HSV/weight planes live in [0,1]; Lab planes use their
/// native ranges.
class ImageF {
public:
    ImageF() = default;
    ImageF(int width, int height, int channels, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    std::size_t pixels_per_plane() const {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const { return data_.empty(); }

    double* plane(int c) { return data_.data() + pixels_per_plane() * c; }
    const double* plane(int c) const { return data_.data() + pixels_per_plane() * c; }

    double& at(int c, int x, int y) {
        return data_[pixels_per_plane() * c + static_cast<std::size_t>(y) * width_ + x];
    }
    double at(int c, int x, int y) const {
        return data_[pixels_per_plane() * c + static_cast<std::size_t>(y) * width_ + x];
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_size(const ImageF& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// Mean over every element of a single plane (0 for an empty plane).
double mean_all(const ImageF& plane);

/// Mean over the strictly positive elements; 0 when none are positive.
double mean_nonzero(const ImageF& plane);

}  // namespace lowlux
