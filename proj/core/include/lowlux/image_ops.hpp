#pragma once

#include "lowlux/image.hpp"

namespace lowlux {

enum class Resample { Bilinear, Nearest };

/// HSV value plane: per-pixel max of R, G, B.
ImageF rgb_to_v(const ImageF& rgb);

/// HSV saturation plane: (max - min) / max, with 0 where max == 0.
ImageF rgb_to_s(const ImageF& rgb);

/// sRGB (D65) to CIELAB. L in [0,100]; a and b in their native ranges.
ImageF rgb_to_lab(const ImageF& rgb);

/// Resample every plane to the target size. Bilinear sampling is
/// edge-aligned: source corners map to destination corners.
ImageF resize(const ImageF& image, int new_width, int new_height,
              Resample method = Resample::Bilinear);

/// Mean over the (2*radius+1)^2 window, truncated at the borders and
/// normalized by the in-bounds pixel count. radius 0 is the identity.
ImageF box_filter(const ImageF& plane, int radius);

struct GuidedFilterParams {
    int window_radius = 1;  // full-resolution window radius
    int subsample = 1;      // internal downsampling rate
    double eta = 0.04;      // regularizer added to the guide variance
};

/// Edge-preserving smoothing of `input` steered by `guide`. The linear-model
/// coefficients are estimated at 1/subsample scale with box windows of
/// radius max(1, round(window_radius/subsample)), then upsampled and applied
/// to the full-resolution guide. subsample == 1 is the exact filter.
ImageF guided_filter_fast(const ImageF& guide, const ImageF& input,
                          const GuidedFilterParams& params);

}  // namespace lowlux
