#include "lowlux/vibration.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lowlux/errors.hpp"

namespace lowlux::vib {

namespace {
constexpr double kPi = std::numbers::pi;
}

Lambda::Lambda(double value) : value_(value) {
    if (!(value > 1.0) || !(value <= 2.0)) {
        throw ConfigError("lambda must lie in (1, 2], got " + std::to_string(value));
    }
}

double displacement(double t, const VibrationParams& p) {
    return std::exp(-p.beta * t) * (p.c1 + p.c2 * t);
}

double velocity(double t, const VibrationParams& p) {
    const double decay = std::exp(-p.beta * t);
    return p.c2 * decay - p.beta * decay * (p.c1 + p.c2 * t);
}

double repulsive_energy(const VibrationParams& p) {
    return 0.5 * p.k * p.c1 * p.c1;
}

double stimulation_energy_raw(const VibrationParams& p) {
    return p.c1 * p.c2 * std::sqrt(p.k * p.m) - 0.5 * p.c2 * p.c2 * p.m;
}

double cycle_energy_raw(const VibrationParams& p) {
    return (p.c1 * p.c2 * p.k) / (2.0 * kPi) -
           (p.c2 * p.c2 * std::sqrt(p.k * p.m)) / (4.0 * kPi);
}

VibrationParams lambda_to_params(Lambda lambda) {
    const double l = lambda.value();
    VibrationParams p;
    p.c1 = 1.0 / (2.0 * std::sqrt(2.0) * kPi);
    p.c2 = std::sqrt(2.0 * (l - 1.0));
    p.k = 4.0 * kPi * kPi * l * l / (l - 1.0);
    return p;
}

VibrationParams at_critical_damping(VibrationParams p, double m) {
    if (!(m > 0.0)) {
        throw ConfigError("critical damping requires a positive stimulus intensity");
    }
    p.m = m;
    p.beta = std::sqrt(p.k / m);
    return p;
}

double stimulation_energy(Lambda lambda, double intensity) {
    const double l = lambda.value();
    return l * std::sqrt(intensity) + (1.0 - l) * intensity;
}

double cycle_energy(Lambda lambda, double intensity) {
    const double l = lambda.value();
    return l * l / std::sqrt(l - 1.0) - l * std::sqrt((l - 1.0) * intensity);
}

}  // namespace lowlux::vib
