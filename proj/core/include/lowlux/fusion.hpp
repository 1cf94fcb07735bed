#pragma once

#include "lowlux/image.hpp"
#include "lowlux/image_ops.hpp"
#include "lowlux/tone_model.hpp"

namespace lowlux {

/// Fusion weight plane. Rough maps are binary {0,1}; fine maps are the
/// guided-filter refinement clamped back to [0,1].
struct WeightMap {
    enum class Stage { Rough, Fine };
    ImageF plane;
    Stage stage = Stage::Rough;
};

/// Hard-threshold segmentation of a value plane: weight 1 where the pixel is
/// strictly below the threshold (dark), 0 otherwise.
WeightMap segment_rough(const ImageF& v_small, double threshold);

/// Window radius that adapts to the plane being filtered:
/// floor((min(width, height) - 1) / 2). Planes narrower than 3 pixels leave
/// no usable window and are rejected.
int dynamic_radius(int width, int height);

/// Guided-filter refinement of a rough weight map at the reduced scale,
/// upsampled to the full resolution and clamped to [0,1]. The guide is the
/// reduced value plane of the globally enhanced image.
WeightMap refine_weights(const ImageF& c_v_small, const WeightMap& rough,
                         const GuidedFilterParams& params, int full_width,
                         int full_height);

/// Per-channel convex blend: out = w * enhanced + (1 - w) * input.
ImageF fuse(const ImageF& input, const ImageF& enhanced, const WeightMap& w_fine);

struct PipelineDiagnostics {
    GammaStar gamma_star;
    fit::CurveParams curve;
    std::vector<double> dv;
    double curve_fit_ms = 0.0;
    double global_ms = 0.0;
    double filter_ms = 0.0;
    double fuse_ms = 0.0;
    double total_ms = 0.0;
};

struct PipelineResult {
    ImageF image;
    PipelineDiagnostics diag;
};

/// Whole enhancement pipeline: global lightness enhancement, reduced-scale
/// segmentation of the input value plane, guided-filter weight refinement
/// steered by the enhanced value plane, and full-resolution fusion.
PipelineResult enhance_full(const ImageF& input, const EnhanceConfig& cfg);

}  // namespace lowlux
