// Integration of the coupled system u_k'' = x u_k - 2 u_k sum_j u_j^2 - eps_k u_k.
#ifndef PAINLEVE_ODE_HPP
#define PAINLEVE_ODE_HPP

#include <limits>

#include "painleve/model.hpp"

namespace painleve::ode {

struct IntegrationOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double max_step = 10.0;
    // Spacing of recorded samples. 0 keeps the per-sample phase advance of the
    // fastest oscillation below pi/8 (adaptive in x).
    double dense_output_dx = 0.0;
    // Only samples with x >= record_from are stored (both directions).
    double record_from = -std::numeric_limits<double>::infinity();
    long long max_steps = 50'000'000;
    double blowup_limit = 1e3;
};

// Right-hand side as a first-order system: y = (u_1..u_n, u_1'..u_n'),
// dy = (u', u'') with u_k'' = (x - eps_k) u_k - 2 u_k sum_j u_j^2.
void derivative(double x, const double* y, double* dy, const EquationParams& params);

// Same, on TrajectoryState (returns (u', u'')).
TrajectoryState rhs(double x, const TrajectoryState& state, const EquationParams& params);

// State at x0 < 0 from the x -> -infty asymptotic formulas, including the
// analytic derivative of envelope, leading phase and log-phase terms.
// Two-mode system only; neglected corrections are O(|x0|^{-7/4}) in u.
TrajectoryState seed_initial_state(const InitialAsymptotics& init, const EquationParams& params,
                                   double x0);

// Adaptive eighth-order integration (embedded 8(5,3) pair, PI step control,
// seventh-order dense output). Either direction of (x0, x1) is accepted.
// Throws integration_error (carrying the last good x) on step underflow,
// blow-up or step-budget exhaustion.
Trajectory integrate(const TrajectoryState& state0, double x0, double x1,
                     const EquationParams& params, const IntegrationOptions& opts = {});

// H = P^2/2 - x X^2/2 + X^4/2 + sum_k eps_k u_k^2 / 2, with X^2 = sum u_k^2.
double hamiltonian_energy(const TrajectoryState& state, double x, const EquationParams& params);

}  // namespace painleve::ode

#endif
