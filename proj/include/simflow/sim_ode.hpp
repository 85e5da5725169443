#pragma once

#include <utility>

#include "simflow/gas.hpp"
#include "simflow/trajectory.hpp"

// Integration of the similarity ODE system
//     V'(x) = -(1/lambda x) G/D,   C'(x) = -(1/lambda x) F/D
// in the variable xi = log|x| (which absorbs the 1/x prefactor), with the
// singular sets handled explicitly: the sonic lines C = +-(1+V) where D
// vanishes, the star point at the origin of the (V,C)-plane, and the saddle
// at (V0, -inf).

namespace simflow {

struct SimOdeControls {
    double rtol = 1e-10;
    double atol = 1e-12;
    double eps_c = 1e-6;      // sonic-point relaunch offset (phase-space distance)
    double eps_0 = 1e-8;      // origin relaunch |x|
    double eps_s = 1e-7;      // cavity saddle-exit offset in V
    double max_dxi = 0.05;    // node spacing cap, keeps interpolants tight
    double c_guard = 60.0;    // asymptote guard on |C|
    double d_endgame = 0.02;  // switch to V-parametrization below this D (arc (a))
    double zero_tol = 1e-4;   // accept a sonic hit as a common zero within this distance
};

// x-form right-hand side. Pre: x != 0 and D(V,C) != 0.
std::pair<double, double> rhs(const GasConfig& cfg, const LambdaBinding& lam, double x, double V,
                              double C);

// Common zeros of F and G on the upper sonic line C = 1+V: roots of a
// quadratic in V. When the discriminant is negative the two points have
// merged and gone complex; v_merged is the real vertex.
struct SonicPoints {
    bool real = false;
    double v_lo = 0.0, v_hi = 0.0;
    double v_merged = 0.0;
};
SonicPoints sonic_points(const GasConfig& cfg, const LambdaBinding& lam);

// Slopes dC/dV of the two solution branches through a common zero of F and G
// (L'Hopital: G_C tau^2 + (G_V - F_C) tau - F_V = 0).
std::pair<double, double> crossing_slopes(const GasConfig& cfg, const LambdaBinding& lam,
                                          double Vc, double Cc);

struct PieceResult {
    TrajectoryPiece piece;  // x, V, C nodes; R left empty
    EventKind termination = EventKind::reached_end;
    SimilarityState end;
};

// Adaptive integration of one smooth piece from `start` toward x_end.
// x_end = 0.0 means "approach the collapse instant": the piece terminates
// with an origin event at |x| = eps_0. Terminal events: D = 0 (sonic line),
// |C| beyond the asymptote guard. A step-size collapse on the sonic line with
// F, G != 0 reports a sonic_fold (non-removable singularity); a collapse away
// from any singular set throws integration_error.
PieceResult integrate_piece(const GasConfig& cfg, const LambdaBinding& lam,
                            const SimilarityState& start, double x_end,
                            const SimOdeControls& ctl);

// Arc-(a) variant: like integrate_piece but finishes the approach to the
// lower sonic line in the V-parametrization (regular through the fold), so
// the returned piece ends exactly on C = -(1+V).
PieceResult integrate_to_sonic_line(const GasConfig& cfg, const LambdaBinding& lam,
                                    const SimilarityState& start, const SimOdeControls& ctl);

struct CrossingInfo {
    SimilarityState relaunched;
    double Vz = 0.0, Cz = 0.0;      // the common zero crossed
    double slope = 0.0;             // analytic branch slope taken
    double incoming_slope = 0.0;    // measured from the approach
    double x_c = 0.0;
};

// Analytic continuation through a common zero on C = 1+V: select the
// eigendirection matching the incoming branch, step eps_c to the far side,
// advance xi by the limiting dxi/dV along that direction.
CrossingInfo cross_critical(const GasConfig& cfg, const LambdaBinding& lam,
                            const PieceResult& approach, const SimOdeControls& ctl);

struct OriginInfo {
    SimilarityState relaunched;  // at x = +eps_0
    double ell = 0.0;            // lim V/x
    double L = 0.0;              // lim C/x
};

// Passage through the star point at (V,C) = (0,0), x = 0: extrapolates the
// limits ell = lim V/x and L = lim C/x from the approach nodes and relaunches
// on the x > 0 side.
OriginInfo cross_origin(const GasConfig& cfg, const LambdaBinding& lam,
                        const TrajectoryPiece& approach, const SimOdeControls& ctl);

// Fill piece.R from the entropy integral with constant K.
void reconstruct_density(const GasConfig& cfg, const LambdaBinding& lam, double K,
                         TrajectoryPiece& piece);

// d ln R / d xi along a trajectory; used as the independent density route in
// tests of the entropy integral.
double dlnR_dxi(const GasConfig& cfg, const LambdaBinding& lam, double V, double C);

}  // namespace simflow
