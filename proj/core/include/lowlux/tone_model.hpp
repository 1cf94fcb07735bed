#pragma once

#include <vector>

#include "lowlux/curve_fit.hpp"
#include "lowlux/image.hpp"
#include "lowlux/vibration.hpp"

namespace lowlux {

/// Ordered gamma probe intensities used to sample the lightness response.
/// At least four distinct values are needed to fit the three-parameter
/// response curve; all must lie in (0, 5].
class GammaSequence {
public:
    GammaSequence();  // default probes {0.3, 0.8, 1.3, 1.8}
    explicit GammaSequence(std::vector<double> gammas);
    const std::vector<double>& values() const { return gammas_; }

private:
    std::vector<double> gammas_;
};

/// Every tunable of the enhancement pipeline, with the recommended defaults.
struct EnhanceConfig {
    double lambda = 2.0;        // joint factor of the energy model, (1,2]
    GammaSequence gammas{};     // curve probe intensities
    double dv_star = 0.25;      // target mean-lightness gain, (0,1)
    double seg_threshold = 0.5; // light/dark split of the value plane, (0,1)
    int downsample = 2;         // weight-map processing rate R
    int gf_subsample = 10;      // guided-filter internal rate r
    double eta = 0.04;          // guided-filter regularizer
    double gamma_lo = 0.1;      // working clamp for the recovered gamma
    double gamma_hi = 5.0;

    void validate() const;  // throws ConfigError with the offending field
};

/// Gamma-corrected plane reweighted by the cycle energy of each pixel:
/// out = I^gamma * E(lambda, I) / (I_max^gamma * E(lambda, I_max)),
/// clamped to [0,1]. The plane maximum maps to exactly 1 and zeros stay 0.
/// An all-zero plane is returned unchanged (no maximum to normalize by).
ImageF modified_gamma_map(const ImageF& plane, vib::Lambda lambda, double gamma);

/// Mean of the strictly positive pixels; 0 for an all-zero plane.
double mean_nonzero_lightness(const ImageF& v_plane);

struct PerceiveResult {
    fit::CurveParams params;
    std::vector<double> dv;  // measured lightness gain per probe gamma
};

/// Probe the value plane with each configured gamma, measure the mean
/// nonzero lightness gain, and fit dv = c + 1/(a*gamma + b) to the samples.
/// A (near-)constant gain sequence yields a degenerate constant curve.
/// Throws on an all-zero plane ("empty lightness").
PerceiveResult perceive_curve(const ImageF& v_plane, const EnhanceConfig& cfg);

struct GammaStar {
    double value = 1.0;      // clamped to the working range
    double unclamped = 1.0;  // raw curve inverse (meaningless when no_solution)
    bool clamped = false;
    bool no_solution = false;  // target gain unreachable; pinned to gamma_lo
};

/// Invert the fitted response curve at the target gain:
/// gamma = (1/(dv_star - c) - b) / a, clamped to [gamma_lo, gamma_hi].
/// Throws on a degenerate curve ("uncontrollable lightness").
GammaStar invert_curve(const fit::CurveParams& params, double dv_star,
                       double gamma_lo, double gamma_hi);

struct GlobalResult {
    ImageF image;
    GammaStar gamma_star;
    fit::CurveParams params;
    std::vector<double> dv;
    double curve_fit_ms = 0.0;  // probing plus fitting plus inversion
    double apply_ms = 0.0;      // per-channel mapping
};

/// Two-phase global lightness enhancement: fit the response curve on the
/// HSV value plane, invert it at cfg.dv_star, then apply the modified gamma
/// map to each RGB channel with its own channel maximum.
GlobalResult enhance_global(const ImageF& rgb, const EnhanceConfig& cfg);

struct SweepPoint {
    double gamma = 0.0;
    double dv_measured = 0.0;
    double dv_fitted = 0.0;
};

/// Fit the curve from cfg.gammas, then measure the actual lightness gain at
/// every gamma in [lo, hi] with the given step and evaluate the fitted curve
/// alongside.
std::vector<SweepPoint> gamma_sweep(const ImageF& v_plane, const EnhanceConfig& cfg,
                                    double lo = 0.3, double hi = 2.2,
                                    double step = 0.05);

/// Mean squared residual of measured minus fitted gains over sweep points.
double sweep_mse_from_points(const std::vector<SweepPoint>& points);

/// gamma_sweep + sweep_mse_from_points in one call.
double gamma_sweep_mse(const ImageF& v_plane, const EnhanceConfig& cfg,
                       double lo = 0.3, double hi = 2.2, double step = 0.05);

}  // namespace lowlux
