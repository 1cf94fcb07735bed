#include "lowlux/fusion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "lowlux/errors.hpp"

namespace lowlux {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

WeightMap segment_rough(const ImageF& v_small, double threshold) {
    if (v_small.channels() != 1) {
        throw std::invalid_argument("segment_rough: single-plane input required");
    }
    if (!(threshold > 0.0) || !(threshold < 1.0)) {
        throw ConfigError("segmentation threshold must lie in (0, 1)");
    }
    WeightMap map{ImageF(v_small.width(), v_small.height(), 1), WeightMap::Stage::Rough};
    const double* src = v_small.plane(0);
    double* dst = map.plane.plane(0);
    const std::size_t n = v_small.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] < threshold ? 1.0 : 0.0;
    return map;
}

int dynamic_radius(int width, int height) {
    const int short_side = std::min(width, height);
    if (short_side < 3) {
        throw Error("dynamic_radius: plane shorter than 3 pixels has no usable window");
    }
    return (short_side - 1) / 2;
}

WeightMap refine_weights(const ImageF& c_v_small, const WeightMap& rough,
                         const GuidedFilterParams& params, int full_width,
                         int full_height) {
    if (!c_v_small.same_size(rough.plane)) {
        throw DimensionError("refine_weights: guide and rough map dimensions differ");
    }
    ImageF fine = guided_filter_fast(c_v_small, rough.plane, params);
    fine = resize(fine, full_width, full_height);
    double* p = fine.plane(0);
    const std::size_t n = fine.pixels_per_plane();
    // The filter can overshoot outside [0,1] near edges; the fusion weights
    // must stay convex.
    for (std::size_t i = 0; i < n; ++i) p[i] = std::clamp(p[i], 0.0, 1.0);
    return WeightMap{std::move(fine), WeightMap::Stage::Fine};
}

ImageF fuse(const ImageF& input, const ImageF& enhanced, const WeightMap& w_fine) {
    if (w_fine.stage != WeightMap::Stage::Fine) {
        throw std::invalid_argument("fuse: weight map must be the fine stage");
    }
    if (input.channels() != 3 || enhanced.channels() != 3) {
        throw std::invalid_argument("fuse: 3-channel images required");
    }
    if (!input.same_size(enhanced) || !input.same_size(w_fine.plane)) {
        throw DimensionError("fuse: image and weight dimensions differ");
    }
    ImageF out(input.width(), input.height(), 3);
    const double* w = w_fine.plane.plane(0);
    const std::size_t n = input.pixels_per_plane();
    for (int c = 0; c < 3; ++c) {
        const double* x = input.plane(c);
        const double* e = enhanced.plane(c);
        double* o = out.plane(c);
        for (std::size_t i = 0; i < n; ++i) {
            o[i] = w[i] * e[i] + (1.0 - w[i]) * x[i];
        }
    }
    return out;
}

PipelineResult enhance_full(const ImageF& input, const EnhanceConfig& cfg) {
    cfg.validate();
    const auto t_total = Clock::now();

    PipelineResult result;
    GlobalResult global = enhance_global(input, cfg);
    result.diag.gamma_star = global.gamma_star;
    result.diag.curve = global.params;
    result.diag.dv = std::move(global.dv);
    result.diag.curve_fit_ms = global.curve_fit_ms;
    result.diag.global_ms = global.apply_ms;

    const auto t_filter = Clock::now();
    const int rate = cfg.downsample;
    // ceil so the trailing row/column strip always survives.
    const int small_w = (input.width() + rate - 1) / rate;
    const int small_h = (input.height() + rate - 1) / rate;

    const ImageF input_v_small = resize(rgb_to_v(input), small_w, small_h);
    const ImageF enhanced_v_small = resize(rgb_to_v(global.image), small_w, small_h);

    const WeightMap rough = segment_rough(input_v_small, cfg.seg_threshold);
    GuidedFilterParams gf;
    gf.window_radius = dynamic_radius(small_w, small_h);
    gf.subsample = cfg.gf_subsample;
    gf.eta = cfg.eta;
    const WeightMap fine =
        refine_weights(enhanced_v_small, rough, gf, input.width(), input.height());
    result.diag.filter_ms = ms_since(t_filter);

    const auto t_fuse = Clock::now();
    result.image = fuse(input, global.image, fine);
    result.diag.fuse_ms = ms_since(t_fuse);
    result.diag.total_ms = ms_since(t_total);
    return result;
}

}  // namespace lowlux
