#include <benchmark/benchmark.h>

#include <cmath>

#include "lowlux/fusion.hpp"
#include "lowlux/image_ops.hpp"
#include "lowlux/metrics.hpp"
#include "lowlux/tone_model.hpp"

namespace {

using lowlux::ImageF;

// Deterministic textured plane; mirrors the generator used by the tests but
// kept local so the benchmarks build standalone.
ImageF bench_plane(int w, int h, unsigned seed) {
    ImageF plane(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = 0.5 + 0.25 * std::sin(0.11 * x + seed) +
                             0.25 * std::sin(0.07 * y + 2.0 * seed);
            plane.at(0, x, y) = 0.5 * (v + (x * 31 + y * 17 + seed) % 97 / 96.0) / 1.5;
        }
    }
    return plane;
}

ImageF bench_rgb(int w, int h, unsigned seed, double exposure) {
    ImageF out(w, h, 3);
    for (int c = 0; c < 3; ++c) {
        const ImageF p = bench_plane(w, h, seed + c);
        for (std::size_t i = 0; i < out.pixels_per_plane(); ++i) {
            out.plane(c)[i] = std::pow(p.plane(0)[i], 1.4) * exposure;
        }
    }
    return out;
}

void BM_EnhanceFull(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const int h = static_cast<int>(state.range(1));
    const ImageF scene = bench_rgb(w, h, 7, 0.45);
    const lowlux::EnhanceConfig cfg;
    for (auto _ : state) {
        auto result = lowlux::enhance_full(scene, cfg);
        benchmark::DoNotOptimize(result.image.data().data());
    }
    state.SetItemsProcessed(state.iterations() * int64_t(w) * h);
}
BENCHMARK(BM_EnhanceFull)
    ->Args({500, 375})
    ->Args({960, 540})
    ->Args({2000, 1312})
    ->Unit(benchmark::kMillisecond);

void BM_ModifiedGammaMap(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ImageF plane = bench_plane(n, n, 3);
    const lowlux::vib::Lambda lambda(2.0);
    for (auto _ : state) {
        auto out = lowlux::modified_gamma_map(plane, lambda, 0.7);
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetItemsProcessed(state.iterations() * int64_t(n) * n);
}
BENCHMARK(BM_ModifiedGammaMap)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_BoxFilter(benchmark::State& state) {
    const ImageF plane = bench_plane(512, 512, 5);
    const int radius = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto out = lowlux::box_filter(plane, radius);
        benchmark::DoNotOptimize(out.data().data());
    }
}
BENCHMARK(BM_BoxFilter)->Arg(4)->Arg(32)->Arg(255)->Unit(benchmark::kMillisecond);

void BM_GuidedFilter(benchmark::State& state) {
    const ImageF guide = bench_plane(512, 512, 9);
    const ImageF input = bench_plane(512, 512, 11);
    const int subsample = static_cast<int>(state.range(0));
    const lowlux::GuidedFilterParams params{lowlux::dynamic_radius(512, 512), subsample,
                                            0.04};
    for (auto _ : state) {
        auto out = lowlux::guided_filter_fast(guide, input, params);
        benchmark::DoNotOptimize(out.data().data());
    }
}
BENCHMARK(BM_GuidedFilter)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Metrics(benchmark::State& state) {
    const ImageF a = bench_rgb(500, 375, 13, 0.9);
    const ImageF b = bench_rgb(500, 375, 17, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lowlux::delta_e(a, b));
        benchmark::DoNotOptimize(lowlux::psnr(a, b));
        benchmark::DoNotOptimize(lowlux::mssim(a, b));
        benchmark::DoNotOptimize(lowlux::loe(a, b));
    }
}
BENCHMARK(BM_Metrics)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
