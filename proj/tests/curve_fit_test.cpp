#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lowlux/curve_fit.hpp"
#include "lowlux/errors.hpp"
#include "testutil.hpp"

using namespace lowlux::fit;

namespace {

FitProblem exact_problem(double a, double b, double c,
                         std::vector<double> xs = {0.3, 0.8, 1.3, 1.8}) {
    FitProblem p;
    p.xs = std::move(xs);
    for (double x : p.xs) p.ys.push_back(c + 1.0 / (a * x + b));
    return p;
}

}  // namespace

TEST_CASE("recovers exact model data") {
    const FitProblem p = exact_problem(2.0, 1.0, 0.1);
    const CurveParams r = solve(p);
    CHECK(r.a == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.b == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.c == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(r.fit_mse < 1e-12);
    CHECK(!r.degenerate);
    CHECK(r.converged);
}

TEST_CASE("fitted curve reproduces every training value") {
    const FitProblem p = exact_problem(3.5, 0.4, -0.2, {0.3, 0.7, 1.1, 1.6, 2.1});
    const CurveParams r = solve(p);
    for (std::size_t i = 0; i < p.xs.size(); ++i) {
        CHECK(evaluate(r, p.xs[i]) == doctest::Approx(p.ys[i]).epsilon(1e-6));
    }
}

TEST_CASE("flat samples degenerate to a constant curve") {
    FitProblem p;
    p.xs = {0.3, 0.8, 1.3, 1.8};
    p.ys = {0.5, 0.5, 0.5, 0.5};
    const CurveParams r = solve(p);
    CHECK(r.degenerate);
    CHECK(r.c == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(evaluate(r, 0.77) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("noisy data fits to the noise floor and within 2x of the grid oracle") {
    testutil::Rng rng(23);
    FitProblem p = exact_problem(2.0, 1.0, 0.1, {0.3, 0.8, 1.3, 1.8, 2.2, 3.0});
    for (double& y : p.ys) y += rng.uniform(-1e-3, 1e-3);

    const CurveParams r = solve(p);
    CHECK(r.fit_mse <= 1e-5);

    const double oracle = testutil::grid_fit_mse(p.xs, p.ys);
    CHECK(r.fit_mse <= 2.0 * oracle + 1e-15);
}

TEST_CASE("result does not depend on sample order") {
    FitProblem sorted = exact_problem(1.4, 0.9, 0.05, {0.3, 0.8, 1.3, 1.8, 2.5});
    testutil::Rng rng(29);
    for (double& y : sorted.ys) y += rng.uniform(-5e-4, 5e-4);

    FitProblem shuffled = sorted;
    const std::vector<std::size_t> order = {3, 0, 4, 2, 1};
    for (std::size_t i = 0; i < order.size(); ++i) {
        shuffled.xs[i] = sorted.xs[order[i]];
        shuffled.ys[i] = sorted.ys[order[i]];
    }

    const CurveParams a = solve(sorted);
    const CurveParams b = solve(shuffled);
    CHECK(a.a == doctest::Approx(b.a).epsilon(1e-6));
    CHECK(a.b == doctest::Approx(b.b).epsilon(1e-6));
    CHECK(a.c == doctest::Approx(b.c).epsilon(1e-6));
}

TEST_CASE("residual at the solution never exceeds the residual at the start") {
    testutil::Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        FitProblem p;
        p.xs = {0.3, 0.8, 1.3, 1.8};
        for (double x : p.xs) {
            p.ys.push_back(0.05 + 1.0 / (rng.uniform(0.5, 3.0) * x + 1.0) +
                           rng.uniform(-0.05, 0.05));
        }
        const auto [lo, hi] = std::minmax_element(p.ys.begin(), p.ys.end());
        if (*hi - *lo < kDegenerateSpread) continue;

        const std::array<double, 3> init = {1.0, 1.0, 0.0};
        double init_sse = 0.0;
        for (std::size_t i = 0; i < p.xs.size(); ++i) {
            const double r = p.ys[i] - init[2] - 1.0 / (init[0] * p.xs[i] + init[1]);
            init_sse += r * r;
        }
        const CurveParams r = solve(p, init);
        CHECK(r.fit_mse * static_cast<double>(p.xs.size()) <= init_sse + 1e-12);
    }
}

TEST_CASE("analytic jacobian of the model matches central differences") {
    testutil::Rng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        CurveParams p;
        p.a = rng.uniform(0.2, 4.0);
        p.b = rng.uniform(0.2, 4.0);
        p.c = rng.uniform(-0.5, 0.5);
        const double x = rng.uniform(0.1, 5.0);
        const double denom = p.a * x + p.b;

        const double da = -x / (denom * denom);
        const double db = -1.0 / (denom * denom);
        const double dc = 1.0;

        const double h = 1e-7;
        auto wiggle = [&](double* field) {
            CurveParams q = p;
            double* target = field == &p.a ? &q.a : field == &p.b ? &q.b : &q.c;
            *target += h;
            const double up = evaluate(q, x);
            *target -= 2.0 * h;
            const double down = evaluate(q, x);
            return (up - down) / (2.0 * h);
        };
        CHECK(wiggle(&p.a) == doctest::Approx(da).epsilon(1e-6));
        CHECK(wiggle(&p.b) == doctest::Approx(db).epsilon(1e-6));
        CHECK(wiggle(&p.c) == doctest::Approx(dc).epsilon(1e-6));
    }
}

TEST_CASE("evaluate") {
    CurveParams p;
    p.a = 1.0;
    p.b = 1.0;
    p.c = 0.0;
    CHECK(evaluate(p, 3.0) == doctest::Approx(0.25).epsilon(1e-15));

    p = CurveParams{2.0, 1.0, 0.1};
    CHECK(evaluate(p, 0.3) == doctest::Approx(0.725).epsilon(1e-15));

    CurveParams flat;
    flat.degenerate = true;
    flat.c = 0.4;
    CHECK(evaluate(flat, 123.0) == doctest::Approx(0.4).epsilon(1e-15));

    CurveParams pole{1.0, -1.0, 0.0};
    CHECK_THROWS_AS(evaluate(pole, 1.0), lowlux::Error);
}

TEST_CASE("rejects malformed problems") {
    FitProblem p;
    p.xs = {0.3, 0.8, 1.3};
    p.ys = {0.1, 0.2, 0.3};
    CHECK_THROWS_AS(solve(p), std::invalid_argument);

    p.xs = {0.3, 0.8, 1.3, 1.8};
    CHECK_THROWS_AS(solve(p), std::invalid_argument);
}
