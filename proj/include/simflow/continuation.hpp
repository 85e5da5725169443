#pragma once

#include <vector>

#include "simflow/eigenvalue.hpp"
#include "simflow/gas.hpp"
#include "simflow/sim_ode.hpp"
#include "simflow/trajectory.hpp"

// Post-collapse construction: arc (a) from the origin to the lower sonic
// line, its Rankine-Hugoniot image (the jump locus), arc (b) integrated in
// the series variable w = k x^(-sigma) from the saddle at (V0, -inf), the
// intersection of the two, and the reflected-shock coordinate B.

namespace simflow {

// Truncated expansion about the saddle at infinity:
//   V(w) = sum_i a[i] w^i,   C(w) = -1/w + sum_i b[i] w^i.
struct SeriesCoeffs {
    std::vector<double> a, b;
    int order = 0;

    std::pair<double, double> eval(double w) const;
};

// Coefficients by order-by-order matching of the similarity ODEs in w.
// A vanishing resonance coefficient truncates the order with a diagnostic.
SeriesCoeffs arc_b_series(const GasConfig& cfg, const LambdaBinding& lam, int N = 12);

struct ShockFit {
    double B = 0.0;    // reflected-shock similarity coordinate
    double w1 = 0.0;   // series coordinate of the intersection
    double k = 0.0;    // series scale, k = B^sigma w1
    double pre_V = 0.0, pre_C = 0.0;    // state ahead of the reflected shock (arc (a))
    double post_V = 0.0, post_C = 0.0;  // state behind (arc (b))
    double R_pre = 0.0, R_post = 0.0;
    SeriesCoeffs series;
};

// Complete similarity solution for one (gamma, n, s) case.
struct SolutionCase {
    GasConfig cfg;
    LambdaBinding lam;
    ShootResult shoot;
    Trajectory traj;            // pieces: [-1,x_c], [x_c,-eps0], [eps0,B], [B,x_last]
    TrajectoryPiece arc_a_full; // arc (a) continued to the sonic line (diagnostics/locus)
    ShockFit fit;
    double ell = 0.0, L = 0.0;  // origin limits of V/x and C/x
    double R0 = 0.0;            // density at collapse, R(0)
    double K_pre = 0.0, K_post = 0.0;
    SimOdeControls controls;
};

// Arc (a): from the origin relaunch to the line C = -(1+V).
PieceResult trace_arc_a(const GasConfig& cfg, const LambdaBinding& lam,
                        const SimilarityState& origin_launch, const SimOdeControls& ctl);

// Jump locus sample: image of an arc-(a) state under rh_jump, C < 0 branch.
SimilarityState jump_locus_point(const GasConfig& cfg, const SimilarityState& arc_a_state);

// Arc (b) nodes integrated in log w from the series seed; terminates at the
// sonic line or at w_max.
struct ArcB {
    std::vector<double> lnw, V, C;
};
ArcB integrate_arc_b(const GasConfig& cfg, const LambdaBinding& lam, const SeriesCoeffs& sc,
                     double w_start, double w_max, const SimOdeControls& ctl);

// Locate the reflected shock: intersect arc (b) with the jump locus of
// arc (a), map back through the jump relations, read B off arc (a).
ShockFit fit_reflected_shock(const GasConfig& cfg, const LambdaBinding& lam,
                             const TrajectoryPiece& arc_a, double K_pre, const SeriesCoeffs& sc,
                             const SimOdeControls& ctl);

struct AsymptoticsReport {
    double sigma_fitted = 0.0, sigma_predicted = 0.0;
    double R_exp_fitted = 0.0, R_exp_predicted = 0.0;
    double RC2_exp_fitted = 0.0, RC2_exp_predicted = 0.0;
    double V_far = 0.0, V0 = 0.0;
    double x_lo = 0.0, x_hi = 0.0;  // fit window
};

// Log-log slope fits on the far arc-(b) tail against the predicted exponents.
AsymptoticsReport asymptotics_check(const SolutionCase& sc, double x_lo = 0.0, double x_hi = 0.0);

// Full pipeline: solve lambda_std, build all pieces, fit the reflected shock.
SolutionCase build_case(const GasConfig& cfg, const SimOdeControls& ctl = {},
                        double shoot_tol = 1e-10, int series_order = 12);

// Same pipeline with lambda given (skips the eigenvalue solve).
SolutionCase build_case_with_lambda(const GasConfig& cfg, double lambda,
                                    const SimOdeControls& ctl = {}, int series_order = 12);

}  // namespace simflow
