#include "lowlux/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lowlux/errors.hpp"
#include "lowlux/image_ops.hpp"

namespace lowlux {

namespace {

void require_match(const ImageF& a, const ImageF& b, const char* who) {
    if (!a.same_size(b) || a.channels() != b.channels()) {
        throw DimensionError(std::string(who) + ": image dimensions differ");
    }
}

ImageF luma601(const ImageF& rgb) {
    ImageF out(rgb.width(), rgb.height(), 1);
    const double* r = rgb.plane(0);
    const double* g = rgb.plane(1);
    const double* b = rgb.plane(2);
    double* y = out.plane(0);
    const std::size_t n = rgb.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
    }
    return out;
}

// 11-tap Gaussian, sigma 1.5, normalized.
std::array<double, 11> gaussian_taps() {
    std::array<double, 11> taps{};
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5;
        taps[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        sum += taps[i];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

// Separable valid-region Gaussian blur: output is (w-10) x (h-10).
std::vector<double> gauss_valid(const std::vector<double>& src, int w, int h,
                                const std::array<double, 11>& taps) {
    const int vw = w - 10;
    const int vh = h - 10;
    std::vector<double> rows(std::size_t(vw) * h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 11; ++k) acc += taps[k] * src[std::size_t(y) * w + x + k];
            rows[std::size_t(y) * vw + x] = acc;
        }
    }
    std::vector<double> out(std::size_t(vw) * vh, 0.0);
    for (int y = 0; y < vh; ++y) {
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 11; ++k) acc += taps[k] * rows[std::size_t(y + k) * vw + x];
            out[std::size_t(y) * vw + x] = acc;
        }
    }
    return out;
}

ImageF lightness_plane(const ImageF& rgb) { return rgb_to_v(rgb); }

}  // namespace

double delta_e(const ImageF& enhanced, const ImageF& reference) {
    require_match(enhanced, reference, "delta_e");
    const ImageF lab_a = rgb_to_lab(enhanced);
    const ImageF lab_b = rgb_to_lab(reference);
    const std::size_t n = lab_a.pixels_per_plane();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dl = lab_a.plane(0)[i] - lab_b.plane(0)[i];
        const double da = lab_a.plane(1)[i] - lab_b.plane(1)[i];
        const double db = lab_a.plane(2)[i] - lab_b.plane(2)[i];
        total += std::sqrt(dl * dl + da * da + db * db);
    }
    return total / static_cast<double>(n);
}

double psnr(const ImageF& a, const ImageF& b) {
    require_match(a, b, "psnr");
    double total = 0.0;
    const std::size_t n = a.pixels_per_plane();
    for (int c = 0; c < a.channels(); ++c) {
        const double* pa = a.plane(c);
        const double* pb = b.plane(c);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = pa[i] - pb[i];
            total += d * d;
        }
    }
    const double mse = total / (static_cast<double>(n) * a.channels());
    if (mse < 1e-10) return kPsnrCap;
    return 10.0 * std::log10(1.0 / mse);
}

double mssim(const ImageF& a, const ImageF& b) {
    require_match(a, b, "mssim");
    if (a.width() < 11 || a.height() < 11) {
        throw Error("mssim: images must be at least 11 pixels on each side");
    }
    const ImageF ya = a.channels() == 3 ? luma601(a) : a;
    const ImageF yb = b.channels() == 3 ? luma601(b) : b;

    const int w = a.width();
    const int h = a.height();
    const std::size_t n = std::size_t(w) * h;
    std::vector<double> xa(n), xb(n), xaa(n), xbb(n), xab(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double va = ya.plane(0)[i];
        const double vb = yb.plane(0)[i];
        xa[i] = va;
        xb[i] = vb;
        xaa[i] = va * va;
        xbb[i] = vb * vb;
        xab[i] = va * vb;
    }

    const auto taps = gaussian_taps();
    const auto mu_a = gauss_valid(xa, w, h, taps);
    const auto mu_b = gauss_valid(xb, w, h, taps);
    const auto m_aa = gauss_valid(xaa, w, h, taps);
    const auto m_bb = gauss_valid(xbb, w, h, taps);
    const auto m_ab = gauss_valid(xab, w, h, taps);

    constexpr double c1 = 0.01 * 0.01;  // (K1 * L)^2 with L = 1
    constexpr double c2 = 0.03 * 0.03;
    double total = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double var_a = m_aa[i] - mu_a[i] * mu_a[i];
        const double var_b = m_bb[i] - mu_b[i] * mu_b[i];
        const double cov = m_ab[i] - mu_a[i] * mu_b[i];
        const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
        const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) *
                           (var_a + var_b + c2);
        total += num / den;
    }
    return total / static_cast<double>(mu_a.size());
}

double loe(const ImageF& enhanced, const ImageF& original) {
    require_match(enhanced, original, "loe");
    ImageF le = lightness_plane(enhanced);
    ImageF lo = lightness_plane(original);

    const int short_side = std::min(le.width(), le.height());
    if (short_side > 100) {
        const double scale = 100.0 / short_side;
        const int nw = std::max(1, int(std::lround(le.width() * scale)));
        const int nh = std::max(1, int(std::lround(le.height() * scale)));
        le = resize(le, nw, nh, Resample::Nearest);
        lo = resize(lo, nw, nh, Resample::Nearest);
    }

    const double* pe = le.plane(0);
    const double* po = lo.plane(0);
    const std::size_t n = le.pixels_per_plane();
    double total = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        const double ex = pe[x];
        const double ox = po[x];
        std::size_t flips = 0;
        for (std::size_t y = 0; y < n; ++y) {
            flips += std::size_t((ex >= pe[y]) != (ox >= po[y]));
        }
        total += static_cast<double>(flips);
    }
    return total / static_cast<double>(n);
}

StatStates statistical_states(const ImageF& fused, const ImageF& input) {
    require_match(fused, input, "statistical_states");
    const double fused_v = mean_nonzero(rgb_to_v(fused));
    const double input_v = mean_nonzero(rgb_to_v(input));
    const double fused_s = mean_all(rgb_to_s(fused));
    const double input_s = mean_all(rgb_to_s(input));
    StatStates s;
    s.dv_m = fused_v - input_v;
    s.ds_m = input_s - fused_s;
    s.d_m = fused_v - fused_s;
    return s;
}

}  // namespace lowlux
