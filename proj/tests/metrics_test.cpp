#include <doctest.h>

#include <cmath>

#include "lowlux/errors.hpp"
#include "lowlux/image_ops.hpp"
#include "lowlux/metrics.hpp"
#include "testutil.hpp"

using lowlux::ImageF;

namespace {

// Invert the scalar Lab lightness of a gray pixel by bisection.
double gray_for_lightness(double target_l) {
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (testutil::srgb_to_lab_scalar(mid, mid, mid).l < target_l) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("identical images score perfectly") {
    const ImageF scene = testutil::synthetic_rgb(32, 24, 111);
    CHECK(lowlux::delta_e(scene, scene) == 0.0);
    CHECK(lowlux::psnr(scene, scene) == lowlux::kPsnrCap);
    CHECK(lowlux::mssim(scene, scene) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lowlux::loe(scene, scene) == 0.0);
}

TEST_CASE("color difference of uniform gray pairs") {
    const double g50 = gray_for_lightness(50.0);
    const double g60 = gray_for_lightness(60.0);
    const ImageF a = testutil::rgb_constant(8, 8, g50, g50, g50);
    const ImageF b = testutil::rgb_constant(8, 8, g60, g60, g60);
    CHECK(lowlux::delta_e(a, b) == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(lowlux::delta_e(b, a) == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("color difference averages per-pixel distances") {
    const double base = gray_for_lightness(40.0);
    const double plus3 = gray_for_lightness(43.0);
    const double plus5 = gray_for_lightness(45.0);
    ImageF a(2, 1, 3);
    ImageF b(2, 1, 3);
    for (int c = 0; c < 3; ++c) {
        a.at(c, 0, 0) = base;
        a.at(c, 1, 0) = base;
        b.at(c, 0, 0) = plus3;
        b.at(c, 1, 0) = plus5;
    }
    CHECK(lowlux::delta_e(a, b) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("color difference is symmetric on arbitrary scenes") {
    const ImageF a = testutil::synthetic_rgb(20, 16, 112);
    const ImageF b = testutil::dark_scene(20, 16, 113);
    CHECK(lowlux::delta_e(a, b) == doctest::Approx(lowlux::delta_e(b, a)).epsilon(1e-12));
    CHECK(lowlux::delta_e(a, b) >= 0.0);
}

TEST_CASE("psnr values") {
    const ImageF zeros = testutil::rgb_constant(10, 10, 0.0, 0.0, 0.0);
    const ImageF tenth = testutil::rgb_constant(10, 10, 0.1, 0.1, 0.1);
    CHECK(lowlux::psnr(zeros, tenth) == doctest::Approx(20.0).epsilon(1e-9));

    const ImageF half = testutil::rgb_constant(10, 10, 0.5, 0.5, 0.5);
    CHECK(lowlux::psnr(zeros, half) == doctest::Approx(6.020599913279624).epsilon(1e-9));

    CHECK(lowlux::psnr(half, half) == lowlux::kPsnrCap);
}

TEST_CASE("psnr caps exactly at the zero-error threshold") {
    ImageF a = testutil::rgb_constant(100, 100, 0.5, 0.5, 0.5);
    ImageF b = a;
    // One differing pixel: MSE = d^2 / 30000.
    b.at(0, 0, 0) += std::sqrt(1e-10 * 30000.0) * 0.99;
    CHECK(lowlux::psnr(a, b) == lowlux::kPsnrCap);
    b = a;
    b.at(0, 0, 0) += std::sqrt(1e-10 * 30000.0) * 1.01;
    CHECK(lowlux::psnr(a, b) < 101.0);
    CHECK(lowlux::psnr(a, b) > 99.0);
}

TEST_CASE("structural similarity") {
    const ImageF scene = testutil::synthetic_rgb(48, 36, 114);
    ImageF scaled = scene;
    for (double& v : scaled.data()) v *= 0.5;
    const double s = lowlux::mssim(scene, scaled);
    CHECK(s > 0.0);
    CHECK(s < 1.0);

    const ImageF a = testutil::rgb_constant(16, 16, 0.5, 0.5, 0.5);
    const ImageF b = testutil::rgb_constant(16, 16, 0.6, 0.6, 0.6);
    CHECK(lowlux::mssim(a, b) ==
          doctest::Approx(testutil::ssim_constant(0.5, 0.6)).epsilon(1e-9));

    const ImageF tiny = testutil::rgb_constant(10, 12, 0.5, 0.5, 0.5);
    CHECK_THROWS_AS(lowlux::mssim(tiny, tiny), lowlux::Error);

    CHECK(lowlux::mssim(scene, testutil::synthetic_rgb(48, 36, 115)) >= -1e-9);
}

TEST_CASE("lightness order error counts flipped pairs") {
    ImageF a(3, 1, 3);
    ImageF b(3, 1, 3);
    const double la[3] = {0.1, 0.2, 0.3};
    const double lb[3] = {0.3, 0.2, 0.1};
    for (int x = 0; x < 3; ++x) {
        for (int c = 0; c < 3; ++c) {
            a.at(c, x, 0) = la[x];
            b.at(c, x, 0) = lb[x];
        }
    }
    CHECK(lowlux::loe(a, b) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(lowlux::loe(a, b) ==
          doctest::Approx(testutil::brute_force_loe(a, b)).epsilon(1e-15));
}

TEST_CASE("order error is zero under strictly monotone remaps") {
    const ImageF scene = testutil::dark_scene(40, 30, 116);
    ImageF remapped = scene;
    for (double& v : remapped.data()) v = std::sqrt(v);
    CHECK(lowlux::loe(remapped, scene) == 0.0);

    ImageF cubed = scene;
    for (double& v : cubed.data()) v = v * v * v;
    CHECK(lowlux::loe(cubed, scene) == 0.0);
}

TEST_CASE("order error matches brute force on small planes") {
    testutil::Rng rng(117);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = rng.uniform_int(1, 4);
        const int h = rng.uniform_int(1, 3);
        ImageF a(w, h, 3);
        ImageF b(w, h, 3);
        for (double& v : a.data()) v = rng.uniform_int(0, 5) / 5.0;
        for (double& v : b.data()) v = rng.uniform_int(0, 5) / 5.0;
        CHECK(lowlux::loe(a, b) ==
              doctest::Approx(testutil::brute_force_loe(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("order error downsamples large images") {
    const ImageF big_a = testutil::synthetic_rgb(240, 180, 118);
    const ImageF big_b = testutil::dark_scene(240, 180, 119);
    const double v = lowlux::loe(big_a, big_b);
    CHECK(v >= 0.0);
    // 240x180 reduces to 133x100 sample points.
    CHECK(v <= 133.0 * 100.0);
}

TEST_CASE("statistical states") {
    const ImageF scene = testutil::dark_scene(32, 24, 120);
    const auto self = lowlux::statistical_states(scene, scene);
    CHECK(self.dv_m == 0.0);
    CHECK(self.ds_m == 0.0);
    const double expected_gap = lowlux::mean_nonzero(lowlux::rgb_to_v(scene)) -
                                lowlux::mean_all(lowlux::rgb_to_s(scene));
    CHECK(self.d_m == doctest::Approx(expected_gap).epsilon(1e-12));

    const ImageF gray_in = testutil::rgb_constant(16, 16, 0.3, 0.3, 0.3);
    const ImageF gray_out = testutil::rgb_constant(16, 16, 0.5, 0.5, 0.5);
    const auto states = lowlux::statistical_states(gray_out, gray_in);
    CHECK(states.dv_m == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(states.ds_m == 0.0);
    CHECK(states.d_m == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("metrics reject dimension mismatches") {
    const ImageF a = testutil::synthetic_rgb(20, 16, 121);
    const ImageF b = testutil::synthetic_rgb(22, 16, 122);
    CHECK_THROWS_AS(lowlux::delta_e(a, b), lowlux::DimensionError);
    CHECK_THROWS_AS(lowlux::psnr(a, b), lowlux::DimensionError);
    CHECK_THROWS_AS(lowlux::mssim(a, b), lowlux::DimensionError);
    CHECK_THROWS_AS(lowlux::loe(a, b), lowlux::DimensionError);
    CHECK_THROWS_AS(lowlux::statistical_states(a, b), lowlux::DimensionError);
}
