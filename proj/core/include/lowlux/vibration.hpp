#pragma once

namespace lowlux::vib {

/// Joint factor replacing the individual membrane constants. Valid range is
/// (1, 2]; the stiffness expression has a pole at 1, so out-of-range values
/// are rejected at construction instead of clamped.
class Lambda {
public:
    explicit Lambda(double value);
    double value() const { return value_; }

private:
    double value_;
};

/// Physical constants of one damped membrane oscillator: the two integral
/// constants of the free solution, the membrane stiffness k, the stimulus
/// intensity m, and the damping rate beta (sqrt(k/m) at critical damping).
struct VibrationParams {
    double c1 = 0.0;
    double c2 = 0.0;
    double k = 0.0;
    double m = 0.0;
    double beta = 0.0;
};

/// Membrane displacement of the critically damped free vibration,
/// s(t) = e^{-beta t} (c1 + c2 t).
double displacement(double t, const VibrationParams& p);

/// Time derivative of displacement,
/// v(t) = c2 e^{-beta t} - beta e^{-beta t} (c1 + c2 t).
double velocity(double t, const VibrationParams& p);

/// Energy spent rejecting the stimulus: (1/2) k c1^2.
double repulsive_energy(const VibrationParams& p);

/// Energy perceived through a single membrane vibration:
/// c1 c2 sqrt(k m) - (1/2) c2^2 m.
double stimulation_energy_raw(const VibrationParams& p);

/// Per-cycle energy response to a photon flow:
/// (1/2pi) c1 c2 k - (1/4pi) c2^2 sqrt(k m).
/// Total for m = 0 as well, although the frequency identity
/// cycle = (sqrt(k/m)/2pi) * stimulation only makes sense for m > 0.
double cycle_energy_raw(const VibrationParams& p);

/// Constants expressed through the joint factor:
/// c1 = 1/(2 sqrt(2) pi), c2 = sqrt(2 (lambda-1)), k = 4 pi^2 lambda^2 / (lambda-1).
/// The stimulus intensity m (and with it beta) is left to the caller.
VibrationParams lambda_to_params(Lambda lambda);

/// Copy of p with stimulus intensity m and the critical damping rate
/// beta = sqrt(k/m) filled in. Requires m > 0.
VibrationParams at_critical_damping(VibrationParams p, double m);

/// Normalized stimulation energy of an intensity in [0,1]:
/// lambda sqrt(i) + (1-lambda) i. Fixed points: 0 -> 0 and 1 -> 1.
double stimulation_energy(Lambda lambda, double intensity);

/// Normalized per-cycle energy of an intensity in [0,1]:
/// lambda^2 / sqrt(lambda-1) - lambda sqrt((lambda-1) i).
/// Strictly decreasing in the intensity and positive on [0,1].
double cycle_energy(Lambda lambda, double intensity);

}  // namespace lowlux::vib
