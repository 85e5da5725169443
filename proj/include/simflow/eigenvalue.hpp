#pragma once

#include <utility>
#include <vector>

#include "simflow/gas.hpp"
#include "simflow/sim_ode.hpp"

// Nonlinear eigenvalue problem for the similarity exponent: find lambda such
// that the pre-collapse trajectory from the problem's initial data reaches a
// common zero of F and G on the sonic line C = 1+V and passes through it
// analytically.

namespace simflow {

// Initial state for the pre-collapse integration. Shock: the Rankine-Hugoniot
// image of the quiescent state at x = -1. Cavity: a saddle-exit step from
// (V,C) = (-1,0) along dZ/dV (Z = C^2), with density from the isentropic
// relation (entropy constant 1) and the launch x from the local linearization.
SimilarityState launch_state(const GasConfig& cfg, const LambdaBinding& lam,
                             const SimOdeControls& ctl);

// Cavity saddle-exit slope dZ/dV at (V,C) = (-1,0).
double cavity_exit_slope(const GasConfig& cfg, double lambda);

enum class ShootOutcome {
    crossed,           // hit C = 1+V at a regular point, or funneled into a common zero
    stalled_interior,  // converged to a critical point off the sonic line
    guard,             // left the phase-plane window
    exhausted,         // arc-length budget spent
};

struct ShootDetail {
    ShootOutcome outcome = ShootOutcome::exhausted;
    double V_hit = 0.0, C_hit = 0.0;
    double x_hit = 0.0;       // similarity coordinate of the hit (from the xi quadrature)
    double residual = 0.0;    // signed distance along the line to the nearest common zero
    int zero_index = -1;      // 0: lower-V zero, 1: upper-V zero, -1: merged/none
};

// One shooting integration at fixed lambda. The residual is V_hit minus the
// nearest common zero of (F, G) on the line (the merged vertex when the two
// zeros have gone complex); positive means the hit lies above (larger C than)
// the zero. Non-crossing outcomes carry a +-sentinel by phase-plane side.
ShootDetail shoot_detail(const GasConfig& cfg, const LambdaBinding& lam,
                         const SimOdeControls& ctl);

double shoot_residual(const GasConfig& cfg, double lambda, const SimOdeControls& ctl);

struct ShootResult {
    double lambda_std = 0.0;
    double crossing_V = 0.0, crossing_C = 0.0;
    double x_c = 0.0;
    int zero_index = -1;
    std::vector<std::pair<double, double>> bracket_history;  // (lambda, residual)
    bool converged = false;
};

std::pair<double, double> default_bracket(const GasConfig& cfg);

// Bisection on the sign structure of the residual, with a guarded secant
// polish on the smooth (crossing) side. Throws no_root_error when the bracket
// carries no sign change (cavity below gamma_std).
ShootResult solve_lambda(const GasConfig& cfg, std::pair<double, double> bracket, double tol,
                         const SimOdeControls& ctl);

inline ShootResult solve_lambda(const GasConfig& cfg, const SimOdeControls& ctl = {}) {
    return solve_lambda(cfg, default_bracket(cfg), 1e-10, ctl);
}

}  // namespace simflow
