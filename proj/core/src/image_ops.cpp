#include "lowlux/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lowlux/errors.hpp"

namespace lowlux {

namespace {

void require_rgb(const ImageF& image, const char* who) {
    if (image.channels() != 3) {
        throw std::invalid_argument(std::string(who) + ": 3-channel image required");
    }
}

// sRGB transfer function with the linear toe segment.
inline double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
    constexpr double kCube = (6.0 / 29.0) * (6.0 / 29.0) * (6.0 / 29.0);
    constexpr double kScale = 1.0 / (3.0 * (6.0 / 29.0) * (6.0 / 29.0));
    return t > kCube ? std::cbrt(t) : kScale * t + 4.0 / 29.0;
}

}  // namespace

ImageF rgb_to_v(const ImageF& rgb) {
    require_rgb(rgb, "rgb_to_v");
    ImageF out(rgb.width(), rgb.height(), 1);
    const double* r = rgb.plane(0);
    const double* g = rgb.plane(1);
    const double* b = rgb.plane(2);
    double* v = out.plane(0);
    const std::size_t n = rgb.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) v[i] = std::max({r[i], g[i], b[i]});
    return out;
}

ImageF rgb_to_s(const ImageF& rgb) {
    require_rgb(rgb, "rgb_to_s");
    ImageF out(rgb.width(), rgb.height(), 1);
    const double* r = rgb.plane(0);
    const double* g = rgb.plane(1);
    const double* b = rgb.plane(2);
    double* s = out.plane(0);
    const std::size_t n = rgb.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = std::max({r[i], g[i], b[i]});
        const double lo = std::min({r[i], g[i], b[i]});
        s[i] = hi > 0.0 ? (hi - lo) / hi : 0.0;
    }
    return out;
}

ImageF rgb_to_lab(const ImageF& rgb) {
    require_rgb(rgb, "rgb_to_lab");
    // D65 reference white.
    constexpr double xn = 0.95047, yn = 1.0, zn = 1.08883;
    ImageF out(rgb.width(), rgb.height(), 3);
    const double* r = rgb.plane(0);
    const double* g = rgb.plane(1);
    const double* b = rgb.plane(2);
    double* lp = out.plane(0);
    double* ap = out.plane(1);
    double* bp = out.plane(2);
    const std::size_t n = rgb.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) {
        const double rl = srgb_to_linear(r[i]);
        const double gl = srgb_to_linear(g[i]);
        const double bl = srgb_to_linear(b[i]);
        const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
        const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
        const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
        const double fx = lab_f(x / xn);
        const double fy = lab_f(y / yn);
        const double fz = lab_f(z / zn);
        lp[i] = static_cast<double>(116.0 * fy - 16.0);
        ap[i] = static_cast<double>(500.0 * (fx - fy));
        bp[i] = static_cast<double>(200.0 * (fy - fz));
    }
    return out;
}

ImageF resize(const ImageF& image, int new_width, int new_height, Resample method) {
    if (new_width <= 0 || new_height <= 0) {
        throw std::invalid_argument("resize: target dimensions must be positive");
    }
    if (new_width == image.width() && new_height == image.height()) return image;

    ImageF out(new_width, new_height, image.channels());
    const int sw = image.width();
    const int sh = image.height();
    // Edge-aligned mapping; a one-pixel target samples the source center.
    const double sx = new_width > 1 ? double(sw - 1) / double(new_width - 1) : 0.0;
    const double sy = new_height > 1 ? double(sh - 1) / double(new_height - 1) : 0.0;

    for (int c = 0; c < image.channels(); ++c) {
        const double* src = image.plane(c);
        double* dst = out.plane(c);
        for (int y = 0; y < new_height; ++y) {
            const double fy = new_height > 1 ? y * sy : (sh - 1) * 0.5;
            for (int x = 0; x < new_width; ++x) {
                const double fx = new_width > 1 ? x * sx : (sw - 1) * 0.5;
                if (method == Resample::Nearest) {
                    const int ix = std::clamp(int(std::lround(fx)), 0, sw - 1);
                    const int iy = std::clamp(int(std::lround(fy)), 0, sh - 1);
                    dst[std::size_t(y) * new_width + x] = src[std::size_t(iy) * sw + ix];
                } else {
                    const int x0 = std::clamp(int(std::floor(fx)), 0, sw - 1);
                    const int y0 = std::clamp(int(std::floor(fy)), 0, sh - 1);
                    const int x1 = std::min(x0 + 1, sw - 1);
                    const int y1 = std::min(y0 + 1, sh - 1);
                    const double ax = fx - x0;
                    const double ay = fy - y0;
                    const double top = (1.0 - ax) * src[std::size_t(y0) * sw + x0] +
                                       ax * src[std::size_t(y0) * sw + x1];
                    const double bot = (1.0 - ax) * src[std::size_t(y1) * sw + x0] +
                                       ax * src[std::size_t(y1) * sw + x1];
                    dst[std::size_t(y) * new_width + x] = (1.0 - ay) * top + ay * bot;
                }
            }
        }
    }
    return out;
}

ImageF box_filter(const ImageF& plane, int radius) {
    if (plane.channels() != 1) {
        throw std::invalid_argument("box_filter: single-plane input required");
    }
    if (radius < 0) throw std::invalid_argument("box_filter: radius must be >= 0");
    if (radius == 0) return plane;

    const int w = plane.width();
    const int h = plane.height();
    const double* src = plane.plane(0);

    // Summed-area table with a zero guard row/column.
    std::vector<double> sat(std::size_t(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double row = 0.0;
        for (int x = 0; x < w; ++x) {
            row += src[std::size_t(y) * w + x];
            sat[std::size_t(y + 1) * (w + 1) + (x + 1)] =
                sat[std::size_t(y) * (w + 1) + (x + 1)] + row;
        }
    }

    ImageF out(w, h, 1);
    double* dst = out.plane(0);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            const double sum = sat[std::size_t(y1 + 1) * (w + 1) + (x1 + 1)] -
                               sat[std::size_t(y0) * (w + 1) + (x1 + 1)] -
                               sat[std::size_t(y1 + 1) * (w + 1) + x0] +
                               sat[std::size_t(y0) * (w + 1) + x0];
            const int count = (y1 - y0 + 1) * (x1 - x0 + 1);
            dst[std::size_t(y) * w + x] = sum / count;
        }
    }
    return out;
}

namespace {

ImageF multiply(const ImageF& a, const ImageF& b) {
    ImageF out(a.width(), a.height(), 1);
    const double* pa = a.plane(0);
    const double* pb = b.plane(0);
    double* po = out.plane(0);
    const std::size_t n = a.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] * pb[i];
    return out;
}

}  // namespace

ImageF guided_filter_fast(const ImageF& guide, const ImageF& input,
                          const GuidedFilterParams& params) {
    if (guide.channels() != 1 || input.channels() != 1) {
        throw std::invalid_argument("guided_filter_fast: single-plane inputs required");
    }
    if (!guide.same_size(input)) {
        throw DimensionError("guided_filter_fast: guide and input dimensions differ");
    }
    if (params.window_radius < 1 || params.subsample < 1 || !(params.eta > 0.0)) {
        throw std::invalid_argument("guided_filter_fast: invalid parameters");
    }

    const int full_w = guide.width();
    const int full_h = guide.height();
    const int r = params.subsample;
    const int small_w = std::max(1, (full_w + r - 1) / r);
    const int small_h = std::max(1, (full_h + r - 1) / r);
    const int radius = std::max(1, int(std::lround(double(params.window_radius) / r)));

    const ImageF guide_s = r > 1 ? resize(guide, small_w, small_h) : guide;
    const ImageF input_s = r > 1 ? resize(input, small_w, small_h) : input;

    const ImageF mean_guide = box_filter(guide_s, radius);
    const ImageF mean_input = box_filter(input_s, radius);
    const ImageF corr_gg = box_filter(multiply(guide_s, guide_s), radius);
    const ImageF corr_gi = box_filter(multiply(guide_s, input_s), radius);

    ImageF a(small_w, small_h, 1);
    ImageF b(small_w, small_h, 1);
    {
        const double* mg = mean_guide.plane(0);
        const double* mi = mean_input.plane(0);
        const double* gg = corr_gg.plane(0);
        const double* gi = corr_gi.plane(0);
        double* pa = a.plane(0);
        double* pb = b.plane(0);
        const std::size_t n = a.pixels_per_plane();
        for (std::size_t i = 0; i < n; ++i) {
            const double var = gg[i] - mg[i] * mg[i];
            const double cov = gi[i] - mg[i] * mi[i];
            pa[i] = cov / (var + params.eta);
            pb[i] = mi[i] - pa[i] * mg[i];
        }
    }

    const ImageF mean_a_small = box_filter(a, radius);
    const ImageF mean_b_small = box_filter(b, radius);
    const ImageF mean_a =
        r > 1 ? resize(mean_a_small, full_w, full_h) : mean_a_small;
    const ImageF mean_b =
        r > 1 ? resize(mean_b_small, full_w, full_h) : mean_b_small;

    ImageF out(full_w, full_h, 1);
    const double* ma = mean_a.plane(0);
    const double* mb = mean_b.plane(0);
    const double* pg = guide.plane(0);
    double* po = out.plane(0);
    const std::size_t n = out.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) po[i] = ma[i] * pg[i] + mb[i];
    return out;
}

}  // namespace lowlux
