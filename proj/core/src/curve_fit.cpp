#include "lowlux/curve_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lowlux/errors.hpp"

namespace lowlux::fit {

namespace {

constexpr double kPoleGuard = 1e-12;

// Sum of squared residuals, or +inf when the curve has a pole at a sample.
double sse(const FitProblem& p, double a, double b, double c) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.xs.size(); ++i) {
        const double denom = a * p.xs[i] + b;
        if (std::abs(denom) < kPoleGuard) return std::numeric_limits<double>::infinity();
        const double r = p.ys[i] - c - 1.0 / denom;
        total += r * r;
    }
    return total;
}

// Solve a symmetric 3x3 system by Gaussian elimination with partial pivoting.
// Returns false when the matrix is numerically singular.
bool solve3(double m[3][3], double rhs[3], double out[3]) {
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[idx[row]][col]) > std::abs(m[idx[pivot]][col])) pivot = row;
        }
        std::swap(idx[col], idx[pivot]);
        const double diag = m[idx[col]][col];
        if (std::abs(diag) < 1e-300) return false;
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[idx[row]][col] / diag;
            for (int k = col; k < 3; ++k) m[idx[row]][k] -= f * m[idx[col]][k];
            rhs[idx[row]] -= f * rhs[idx[col]];
        }
    }
    for (int col = 2; col >= 0; --col) {
        double v = rhs[idx[col]];
        for (int k = col + 1; k < 3; ++k) v -= m[idx[col]][k] * out[k];
        out[col] = v / m[idx[col]][col];
    }
    return std::isfinite(out[0]) && std::isfinite(out[1]) && std::isfinite(out[2]);
}

}  // namespace

CurveParams solve(const FitProblem& problem, std::array<double, 3> init, int max_iter,
                  double tol) {
    const std::size_t n = problem.xs.size();
    if (n != problem.ys.size()) {
        throw std::invalid_argument("curve fit: xs and ys differ in length");
    }
    if (n < 4) {
        throw std::invalid_argument("curve fit: at least four sample points are required");
    }

    CurveParams result;

    const auto [y_lo, y_hi] = std::minmax_element(problem.ys.begin(), problem.ys.end());
    if (*y_hi - *y_lo < kDegenerateSpread) {
        double mean = 0.0;
        for (double y : problem.ys) mean += y;
        mean /= static_cast<double>(n);
        double mse = 0.0;
        for (double y : problem.ys) mse += (y - mean) * (y - mean);
        result.a = init[0];
        result.b = init[1];
        result.c = mean;
        result.fit_mse = mse / static_cast<double>(n);
        result.degenerate = true;
        return result;
    }

    double a = init[0], b = init[1], c = init[2];
    double best_sse = sse(problem, a, b, c);
    double mu = 1e-3;

    int iter = 0;
    bool bailed = false;
    for (; iter < max_iter; ++iter) {
        // Gradient and normal matrix from the analytic Jacobian of the model:
        // dm/da = -x/(ax+b)^2, dm/db = -1/(ax+b)^2, dm/dc = 1.
        double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double jtr[3] = {0, 0, 0};
        bool pole = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double denom = a * problem.xs[i] + b;
            if (std::abs(denom) < kPoleGuard) {
                pole = true;
                break;
            }
            const double inv = 1.0 / denom;
            const double r = problem.ys[i] - c - inv;
            const double ja = -problem.xs[i] * inv * inv;
            const double jb = -inv * inv;
            const double jc = 1.0;
            const double j[3] = {ja, jb, jc};
            for (int u = 0; u < 3; ++u) {
                jtr[u] += j[u] * r;
                for (int v = 0; v < 3; ++v) jtj[u][v] += j[u] * j[v];
            }
        }
        if (pole) {
            bailed = true;
            break;
        }

        const double grad_norm =
            std::max({std::abs(jtr[0]), std::abs(jtr[1]), std::abs(jtr[2])});
        if (grad_norm <= tol) break;

        // Try damped steps until one lowers the residual.
        bool accepted = false;
        while (mu < 1e14) {
            double m[3][3];
            for (int u = 0; u < 3; ++u) {
                for (int v = 0; v < 3; ++v) m[u][v] = jtj[u][v];
                m[u][u] += mu;
            }
            double rhs[3] = {jtr[0], jtr[1], jtr[2]};
            double delta[3];
            if (solve3(m, rhs, delta)) {
                const double na = a + delta[0], nb = b + delta[1], nc = c + delta[2];
                const double trial = sse(problem, na, nb, nc);
                if (trial < best_sse) {
                    a = na;
                    b = nb;
                    c = nc;
                    best_sse = trial;
                    mu = std::max(mu / 10.0, 1e-12);
                    accepted = true;
                    break;
                }
            }
            mu *= 10.0;
        }
        if (!accepted) {
            bailed = true;
            break;
        }
    }

    result.a = a;
    result.b = b;
    result.c = c;
    result.fit_mse = best_sse / static_cast<double>(n);
    result.converged = !bailed;
    result.iterations = iter;
    return result;
}

double evaluate(const CurveParams& params, double x) {
    if (params.degenerate) return params.c;
    const double denom = params.a * x + params.b;
    if (std::abs(denom) < kPoleGuard) {
        throw Error("curve evaluation at a pole: a*x + b == 0");
    }
    return params.c + 1.0 / denom;
}

}  // namespace lowlux::fit
