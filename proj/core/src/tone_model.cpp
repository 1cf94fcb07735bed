#include "lowlux/tone_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "lowlux/errors.hpp"
#include "lowlux/image_ops.hpp"

namespace lowlux {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

GammaSequence::GammaSequence() : gammas_{0.3, 0.8, 1.3, 1.8} {}

GammaSequence::GammaSequence(std::vector<double> gammas) : gammas_(std::move(gammas)) {
    if (gammas_.size() < 4) {
        throw ConfigError("gamma sequence needs at least four probe values");
    }
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        if (!(gammas_[i] > 0.0) || !(gammas_[i] <= 5.0)) {
            throw ConfigError("gamma probes must lie in (0, 5], got " +
                              std::to_string(gammas_[i]));
        }
        if (i > 0 && !(gammas_[i] > gammas_[i - 1])) {
            throw ConfigError("gamma probes must be strictly increasing");
        }
    }
}

void EnhanceConfig::validate() const {
    if (!(lambda > 1.0) || !(lambda <= 2.0)) {
        throw ConfigError("lambda must lie in (1, 2], got " + std::to_string(lambda));
    }
    if (!(dv_star > 0.0) || !(dv_star < 1.0)) {
        throw ConfigError("dv target must lie in (0, 1), got " + std::to_string(dv_star));
    }
    if (!(seg_threshold > 0.0) || !(seg_threshold < 1.0)) {
        throw ConfigError("segmentation threshold must lie in (0, 1), got " +
                          std::to_string(seg_threshold));
    }
    if (downsample < 1) throw ConfigError("downsample rate must be >= 1");
    if (gf_subsample < 1) throw ConfigError("guided-filter subsample rate must be >= 1");
    if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
    if (!(gamma_lo > 0.0) || !(gamma_hi > gamma_lo)) {
        throw ConfigError("gamma clamp range must satisfy 0 < lo < hi");
    }
}

ImageF modified_gamma_map(const ImageF& plane, vib::Lambda lambda, double gamma) {
    if (plane.channels() != 1) {
        throw std::invalid_argument("modified_gamma_map: single-plane input required");
    }
    if (!(gamma > 0.0)) {
        throw ConfigError("gamma intensity must be > 0, got " + std::to_string(gamma));
    }

    const double* src = plane.plane(0);
    const std::size_t n = plane.pixels_per_plane();
    double max_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_value = std::max(max_value, src[i]);
    if (max_value <= 0.0) return plane;

    const double norm =
        std::pow(max_value, gamma) * vib::cycle_energy(lambda, max_value);

    ImageF out(plane.width(), plane.height(), 1);
    double* dst = out.plane(0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = src[i];
        // For small gamma the map can overshoot interior pixels past the
        // value at the plane maximum, so clamp into the valid codomain.
        const double mapped =
            std::pow(v, gamma) * vib::cycle_energy(lambda, v) / norm;
        dst[i] = std::clamp(mapped, 0.0, 1.0);
    }
    return out;
}

double mean_nonzero_lightness(const ImageF& v_plane) { return mean_nonzero(v_plane); }

PerceiveResult perceive_curve(const ImageF& v_plane, const EnhanceConfig& cfg) {
    cfg.validate();
    const double base = mean_nonzero_lightness(v_plane);
    if (base == 0.0) throw Error("empty lightness: value plane has no nonzero pixels");

    const vib::Lambda lambda(cfg.lambda);
    PerceiveResult result;
    fit::FitProblem problem;
    for (double gamma : cfg.gammas.values()) {
        const ImageF mapped = modified_gamma_map(v_plane, lambda, gamma);
        const double dv = mean_nonzero_lightness(mapped) - base;
        result.dv.push_back(dv);
        problem.xs.push_back(gamma);
        problem.ys.push_back(dv);
    }
    result.params = fit::solve(problem);
    return result;
}

GammaStar invert_curve(const fit::CurveParams& params, double dv_star, double gamma_lo,
                       double gamma_hi) {
    if (params.degenerate) {
        throw Error("uncontrollable lightness: response curve is constant");
    }
    GammaStar out;
    const double denom = dv_star - params.c;
    double raw = std::numeric_limits<double>::quiet_NaN();
    if (denom != 0.0 && params.a != 0.0) {
        raw = (1.0 / denom - params.b) / params.a;
    }
    // A non-finite or nonpositive root means the target gain is not reached
    // by any usable gamma; pin to the bright end of the working range.
    if (!std::isfinite(raw) || raw <= 0.0) {
        out.value = gamma_lo;
        out.unclamped = raw;
        out.clamped = true;
        out.no_solution = true;
        return out;
    }
    out.unclamped = raw;
    out.value = std::clamp(raw, gamma_lo, gamma_hi);
    out.clamped = out.value != raw;
    return out;
}

GlobalResult enhance_global(const ImageF& rgb, const EnhanceConfig& cfg) {
    if (rgb.channels() != 3) {
        throw std::invalid_argument("enhance_global: 3-channel image required");
    }
    cfg.validate();

    GlobalResult result;
    const auto t0 = Clock::now();
    const ImageF v = rgb_to_v(rgb);
    PerceiveResult perceived = perceive_curve(v, cfg);
    result.gamma_star =
        invert_curve(perceived.params, cfg.dv_star, cfg.gamma_lo, cfg.gamma_hi);
    result.params = perceived.params;
    result.dv = std::move(perceived.dv);
    result.curve_fit_ms = ms_since(t0);

    const auto t1 = Clock::now();
    const vib::Lambda lambda(cfg.lambda);
    result.image = ImageF(rgb.width(), rgb.height(), 3);
    for (int c = 0; c < 3; ++c) {
        ImageF channel(rgb.width(), rgb.height(), 1);
        std::copy(rgb.plane(c), rgb.plane(c) + rgb.pixels_per_plane(), channel.plane(0));
        const ImageF mapped = modified_gamma_map(channel, lambda, result.gamma_star.value);
        std::copy(mapped.plane(0), mapped.plane(0) + mapped.pixels_per_plane(),
                  result.image.plane(c));
    }
    result.apply_ms = ms_since(t1);
    return result;
}

std::vector<SweepPoint> gamma_sweep(const ImageF& v_plane, const EnhanceConfig& cfg,
                                    double lo, double hi, double step) {
    if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0)) {
        throw ConfigError("sweep range must satisfy 0 < lo <= hi with step > 0");
    }
    const PerceiveResult perceived = perceive_curve(v_plane, cfg);
    const double base = mean_nonzero_lightness(v_plane);
    const vib::Lambda lambda(cfg.lambda);

    std::vector<SweepPoint> points;
    // Half-step slack so hi itself survives the float walk.
    for (double gamma = lo; gamma <= hi + step * 0.5; gamma += step) {
        SweepPoint pt;
        pt.gamma = gamma;
        const ImageF mapped = modified_gamma_map(v_plane, lambda, gamma);
        pt.dv_measured = mean_nonzero_lightness(mapped) - base;
        pt.dv_fitted = fit::evaluate(perceived.params, gamma);
        points.push_back(pt);
    }
    return points;
}

double sweep_mse_from_points(const std::vector<SweepPoint>& points) {
    if (points.empty()) return 0.0;
    double total = 0.0;
    for (const SweepPoint& pt : points) {
        const double r = pt.dv_measured - pt.dv_fitted;
        total += r * r;
    }
    return total / static_cast<double>(points.size());
}

double gamma_sweep_mse(const ImageF& v_plane, const EnhanceConfig& cfg, double lo,
                       double hi, double step) {
    return sweep_mse_from_points(gamma_sweep(v_plane, cfg, lo, hi, step));
}

}  // namespace lowlux
