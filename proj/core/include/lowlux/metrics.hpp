#pragma once

#include <string>

#include "lowlux/image.hpp"

namespace lowlux {

/// Ceiling reported instead of infinity when two images are numerically
/// identical (mean squared error below 1e-10).
inline constexpr double kPsnrCap = 99.0;

/// Mean Euclidean CIELAB distance between corresponding pixels.
double delta_e(const ImageF& enhanced, const ImageF& reference);

/// 10*log10(1/MSE) over all channels on the [0,1] range, capped at 99 dB.
double psnr(const ImageF& a, const ImageF& b);

/// Mean single-scale structural similarity of the two luma planes
/// (BT.601 weights), 11x11 Gaussian window with sigma 1.5, K1 = 0.01,
/// K2 = 0.03, dynamic range 1. Needs at least 11 pixels on each side.
double mssim(const ImageF& a, const ImageF& b);

/// Lightness order error: with per-pixel lightness max(R,G,B) and both
/// planes reduced so the short side is about 100 pixels, the mean over
/// pixels x of how many pixels y flip their relative order between the two
/// images.
double loe(const ImageF& enhanced, const ImageF& original);

struct StatStates {
    double dv_m = 0.0;  // mean lightness gain (nonzero-pixel means)
    double ds_m = 0.0;  // mean saturation loss
    double d_m = 0.0;   // lightness/saturation gap of the result
};

/// The three statistical states of a result against its source image.
StatStates statistical_states(const ImageF& fused, const ImageF& input);

/// Per-image score bundle for batch reports.
struct MetricsReport {
    std::string id;
    double delta_e = 0.0;
    double psnr = 0.0;
    double mssim = 0.0;
    double loe = 0.0;
    double dv_m = 0.0;
    double ds_m = 0.0;
    double d_m = 0.0;
};

}  // namespace lowlux
