#pragma once

#include <array>
#include <vector>

#include "simflow/fields.hpp"

// Numerical certification of the radial weak-solution requirements for the
// constructed shock flow: the (P1)-(P3) profile conditions, continuity in
// time of local mass/momentum/energy, local space-time integrability, and
// the vanishing of the r = delta boundary-flux terms in the weak forms of
// the three conservation laws.

namespace simflow {

struct PReport {
    bool P1 = false, P2 = false, P3 = false;
    double one_plus_V_min = 0.0, one_plus_V_max = 0.0;
    double ell = 0.0, L = 0.0;
    double V_far_gap = 0.0;  // |V(x_max) - V0|
    double x_far = 0.0;
};

PReport check_P_conditions(const FlowField& ff);

struct Conserved {
    double M = 0.0, I = 0.0, EK = 0.0, EP = 0.0;
};

// Transformed x-integral forms (the implementation route).
Conserved local_conserved(const FlowField& ff, double t, double rbar);

// Direct r-space quadrature of the sampled fields (the independent route).
Conserved local_conserved_r_route(const FlowField& ff, double t, double rbar);

// Closed forms at the collapse instant.
Conserved conserved_at_collapse(const FlowField& ff, double rbar);

struct ContinuityRow {
    double t = 0.0;
    Conserved vals;
    std::array<double, 4> rel_gap{};  // |value - closed form| / |closed form|
};

struct ContinuityReport {
    std::vector<ContinuityRow> rows;
    Conserved at_collapse;
    std::array<double, 4> limit_gap{};  // at the smallest |t| on each side, worst of the two
};

ContinuityReport continuity_scan(const FlowField& ff, double rbar,
                                 const std::vector<double>& t_grid);

struct IntegrabilityReport {
    double I2 = 0.0, I3 = 0.0, P0 = 0.0, P1 = 0.0;
    bool tail_condition = false;  // alpha + beta(1/lambda - 1) > -1 for all cases
    bool finite = false;
};

IntegrabilityReport integrability(const FlowField& ff, double rbar);

enum class ConservationLaw { mass, momentum, energy };

// C-infinity tensor bump, psi(t,r) = bump((t-t0)/ht) * radial(r/hr); the
// radial factor carries an extra r for the momentum equation so psi(t,0) = 0.
struct BumpTestFunction {
    double t0 = 0.0, ht = 1.0, hr = 1.5;
    bool vanish_at_axis = false;

    double operator()(double t, double r) const;
    double t_end() const { return t0 + ht; }
};

struct FluxSweepResult {
    ConservationLaw law;
    std::vector<double> deltas;
    std::vector<double> residuals;  // |boundary term| at each delta
    double fitted_exponent = 0.0;   // least squares on the last three points
    double predicted_exponent = 0.0;
    bool monotone_decay = false;
};

FluxSweepResult flux_residual_sweep(const FlowField& ff, ConservationLaw law,
                                    const BumpTestFunction& psi,
                                    const std::vector<double>& deltas);

struct TwoRouteRow {
    double t, rbar;
    Conserved x_route, r_route;
    double worst_rel = 0.0;
};

struct VerifyReport {
    bool lambda_ok = false;
    bool informational = false;  // cavity: the weak-form theorem is shock-case
    PReport p;
    ContinuityReport continuity;
    IntegrabilityReport integ;
    std::vector<FluxSweepResult> flux;
    std::vector<TwoRouteRow> two_route;
    double rbar = 1.0;
};

struct VerifyOptions {
    double rbar = 1.0;
    std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4};
    int t_decades = 7;       // continuity grid +-10^{-k}, k = 2..t_decades+1
    int two_route_samples = 20;
    unsigned rng_seed = 12345;  // fixed: outputs are deterministic
};

VerifyReport verify(const FlowField& ff, const VerifyOptions& opt = {});

}  // namespace simflow
