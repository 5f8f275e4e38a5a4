// Extraction of the final asymptotic parameters from an integrated tail.
#ifndef PAINLEVE_FIT_HPP
#define PAINLEVE_FIT_HPP

#include "painleve/model.hpp"

namespace painleve::fit {

struct CorrectionFlags {
    bool renormalized_regular = false;  // sqrt((x - 2 u2^2)/2) instead of sqrt(x/2)
    bool phase_shift = false;           // phi1 -> phi1 - 2 pi I2 sqrt(eps/(2x))

    static CorrectionFlags all() { return {true, true}; }
    static CorrectionFlags none() { return {}; }
};

struct ModelPoint {
    double u1, u2, du1, du2;
};

// Evaluate the x -> +infty model
//   u1 = sigma sqrt(x/2) + sigma rho (2x)^{-1/4} cos[(2 sqrt2/3) x^{3/2}
//        - (3/2) rho^2 ln x + phi1]
//   u2 = sigma A cos[sqrt(eps) x - (A^2 sqrt(eps)/2) ln x + phi2]
// with the selected finite-x corrections, plus analytic x-derivatives.
ModelPoint final_asymptote_model(double x, const FinalAsymptotics& fin,
                                 const EquationParams& params, CorrectionFlags corrections);

// Sign of the regular part from the windowed mean of u1 (the oscillation
// averages out). Throws ambiguous_sign_error when the mean is below the noise
// floor of the window.
int estimate_sigma(const Trajectory& traj, double x_lo, double x_hi);

struct FitReport {
    FinalAsymptotics final;
    double rms_residual = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    CorrectionFlags corrections;
};

struct fit_error : std::runtime_error {
    FitReport best;
    fit_error(const std::string& msg, FitReport b) : std::runtime_error(msg), best(std::move(b)) {}
};

// Nonlinear least squares of the model over the windowed samples.
// sigma is frozen from estimate_sigma; amplitudes are seeded from detrended
// RMS values, phases from a 64-point matched filter, and the minimizer is
// restarted from 8 phase-grid corners. Analytic Jacobian throughout.
FitReport fit_tail(const Trajectory& traj, double x_lo, double x_hi,
                   CorrectionFlags corrections = CorrectionFlags::all());

// Default window: last 20% of the trajectory, clipped to x >= max(50, 10 eps).
FitReport fit_tail(const Trajectory& traj, CorrectionFlags corrections = CorrectionFlags::all());

}  // namespace painleve::fit

#endif
