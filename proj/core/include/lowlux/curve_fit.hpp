#pragma once

#include <array>
#include <vector>

namespace lowlux::fit {

/// Parameters of the reciprocal-affine curve y = c + 1/(a x + b), plus fit
/// diagnostics. `degenerate` marks a (near-)flat sample set where the three
/// parameters are unidentifiable; the curve is then the constant c.
struct CurveParams {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
    double fit_mse = 0.0;
    bool degenerate = false;
    bool converged = true;
    int iterations = 0;
};

/// Sample set for the fixed model y = c + 1/(a x + b). At least four points
/// are needed to identify three parameters with a residual left over.
struct FitProblem {
    std::vector<double> xs;
    std::vector<double> ys;
};

/// Spread below which the sample set is treated as constant.
inline constexpr double kDegenerateSpread = 1e-4;

/// Damped least squares with the analytic Jacobian. Accepts steps that lower
/// the residual, damping up by 10x on rejection and down by 10x on success.
/// Stops when the gradient norm falls below `tol` or after `max_iter` passes;
/// if damping cannot recover a usable step, returns the best parameters seen
/// with `converged` cleared.
CurveParams solve(const FitProblem& problem,
                  std::array<double, 3> init = {1.0, 1.0, 0.0},
                  int max_iter = 200,
                  double tol = 1e-10);

/// Curve value at x. Degenerate parameter sets evaluate to the constant c;
/// otherwise a x + b == 0 is a pole and is rejected.
double evaluate(const CurveParams& params, double x);

}  // namespace lowlux::fit
