#pragma once

#include <cmath>
#include <string>

#include "simflow/errors.hpp"

// Gas parameters and the algebraic layer of the similarity system:
// the polynomials D, G and the rational function F, the Rankine-Hugoniot
// jump map in similarity variables, and ideal-gas EOS helpers.
//
// Sign conventions: C > 0 on pre-collapse pieces (t < 0), C < 0 after the
// trajectory passes the origin of the (V,C)-plane. C is stored as-is.

namespace simflow {

struct GasConfig {
    double gamma = 3.0;  // adiabatic exponent, > 1
    int n = 3;           // spatial dimension, 2 (cylindrical) or 3 (spherical)
    int s = 1;           // 1 = shock problem, 0 = collapsing cavity
    double cv = 1.0;     // temperature scale theta = e / ((gamma-1) cv)

    int m() const { return n - 1; }

    void validate() const {
        if (!(gamma > 1.0))
            throw validation_error("gamma must exceed 1, got " + std::to_string(gamma));
        if (n == 1)
            throw validation_error(
                "n = 1 (slab symmetry) is refused: the similarity trajectory from the "
                "slab initial state terminates at a phase-plane critical point strictly "
                "above the sonic line C = 1+V and never reaches it, so no analytic "
                "sonic crossing -- and hence no similarity eigenvalue -- exists");
        if (n != 2 && n != 3)
            throw validation_error("n must be 2 or 3, got " + std::to_string(n));
        if (s != 0 && s != 1)
            throw validation_error("kind flag must be 0 (cavity) or 1 (shock)");
        if (!(cv > 0.0))
            throw validation_error("cv must be positive");
    }
};

// Constants fixed once the similarity exponent lambda is bound to a gas.
struct LambdaBinding {
    double lambda = 0.0;
    double kappa = 0.0;  // density exponent: 0 (shock), -2(lambda-1)/(gamma-1) (cavity)
    double q = 0.0;      // exponent in the entropy integral
    double V0 = 0.0;     // vertical asymptote of {G = 0}, saddle at (V0, -inf)
    double sigma = 0.0;  // far-field exponent, C(x) ~ -x^sigma
};

inline LambdaBinding bind_lambda(const GasConfig& cfg, double lambda) {
    cfg.validate();
    if (!(lambda > 1.0))
        throw validation_error("lambda must exceed 1 (collapse with unbounded interface speed)");
    LambdaBinding lb;
    lb.lambda = lambda;
    lb.kappa = (cfg.s == 1) ? 0.0 : -2.0 * (lambda - 1.0) / (cfg.gamma - 1.0);
    lb.q = (lb.kappa * (cfg.gamma - 1.0) + 2.0 * (lambda - 1.0)) / (lb.kappa + cfg.n);
    lb.V0 = -2.0 * (lambda - 1.0) / (cfg.n * (cfg.gamma + cfg.s - 1.0));
    lb.sigma = (1.0 / lambda) *
               (1.0 + cfg.s * (lambda - 1.0) / ((cfg.gamma + cfg.s - 1.0) * (1.0 + lb.V0)));
    return lb;
}

// Alternative route to sigma: expand in z = (lambda-1)/((n-1)(gamma+s-1)).
// Must agree with LambdaBinding::sigma identically.
inline double sigma_via_z(const GasConfig& cfg, double lambda, double V0) {
    const double z = (lambda - 1.0) / ((cfg.n - 1.0) * (cfg.gamma + cfg.s - 1.0));
    return (1.0 / lambda) * (1.0 + cfg.s * (cfg.n - 1.0) * z / (1.0 + V0));
}

struct SimilarityState {
    double x = 0.0;
    double V = 0.0;
    double C = 0.0;
    double R = 0.0;
};

template <typename Scalar>
struct DGFValues {
    Scalar D, G, F;
};

// D = (1+V)^2 - C^2 vanishes on the sonic lines C = +-(1+V).
// G and F are kept in the exact rational structure; the (1+V)^{-1} pole of F
// exists only in the shock case and is guarded.
template <typename Scalar>
DGFValues<Scalar> eval_dgf(const GasConfig& cfg, const LambdaBinding& lam, Scalar V, Scalar C) {
    const double g = cfg.gamma, n = cfg.n, s = cfg.s, la = lam.lambda;
    if (cfg.s == 1 && V == Scalar(-1))
        throw singular_evaluation_error("F has a (1+V)^-1 pole at V = -1 in the shock case");
    const Scalar opv = Scalar(1) + V;
    const Scalar D = opv * opv - C * C;
    const Scalar G = C * C * (n * V + 2.0 * (la - 1.0) / (g + s - 1.0)) - V * opv * (la + V);
    const double A2 = 1.0 + (n - 1.0) * (g - 1.0) / 2.0;
    const double A1 = ((n - 1.0) * (g - 1.0) + (g - 3.0) * (la - 1.0)) / 2.0;
    const double A0 = (g - 1.0) * (la - 1.0) / 2.0;
    Scalar pole = Scalar(0);
    if (cfg.s == 1) pole = (la - 1.0) / (g * opv);
    const Scalar F = C * (C * C * (Scalar(1) + pole) - A2 * opv * opv + A1 * opv - A0);
    return {D, G, F};
}

// Analytic partials of (D, G, F) w.r.t. (V, C); needed for the sonic-point
// eigen-analysis.
struct DGFJacobian {
    double DV, DC, GV, GC, FV, FC;
};

inline DGFJacobian eval_dgf_jacobian(const GasConfig& cfg, const LambdaBinding& lam, double V,
                                     double C) {
    const double g = cfg.gamma, n = cfg.n, la = lam.lambda;
    if (cfg.s == 1 && V == -1.0)
        throw singular_evaluation_error("F has a (1+V)^-1 pole at V = -1 in the shock case");
    const double opv = 1.0 + V;
    const double e = 2.0 * (la - 1.0) / (g + cfg.s - 1.0);
    const double A2 = 1.0 + (n - 1.0) * (g - 1.0) / 2.0;
    const double A1 = ((n - 1.0) * (g - 1.0) + (g - 3.0) * (la - 1.0)) / 2.0;
    const double A0 = (g - 1.0) * (la - 1.0) / 2.0;
    DGFJacobian j;
    j.DV = 2.0 * opv;
    j.DC = -2.0 * C;
    j.GV = C * C * n - (opv * (la + V) + V * (la + V) + V * opv);
    j.GC = 2.0 * C * (n * V + e);
    const double pole = (cfg.s == 1) ? (la - 1.0) / (g * opv) : 0.0;
    const double dpole = (cfg.s == 1) ? -(la - 1.0) / (g * opv * opv) : 0.0;
    j.FV = C * (C * C * dpole - 2.0 * A2 * opv + A1);
    j.FC = (3.0 * C * C * (1.0 + pole) - A2 * opv * opv + A1 * opv - A0);
    return j;
}

inline bool is_admissible(const SimilarityState& st) {
    return st.C * st.C < (1.0 + st.V) * (1.0 + st.V);
}

enum class CBranch { positive, negative };

// Jump relations across a similarity shock path x = const. Input is the state
// ahead (supersonic side); output the state behind. The same map applied to
// the output recovers the input (the relations are an involution).
inline SimilarityState rh_jump(const GasConfig& cfg, const SimilarityState& ahead,
                               CBranch branch = CBranch::positive) {
    if (!is_admissible(ahead))
        throw entropy_violation_error("upstream state is not supersonic relative to the shock");
    const double g = cfg.gamma;
    const double opv0 = 1.0 + ahead.V;
    const double opv1 = (g - 1.0) / (g + 1.0) * opv0 + 2.0 * ahead.C * ahead.C / ((g + 1.0) * opv0);
    const double C1sq = ahead.C * ahead.C + (g - 1.0) / 2.0 * (opv0 * opv0 - opv1 * opv1);
    SimilarityState behind;
    behind.x = ahead.x;
    behind.V = opv1 - 1.0;
    behind.C = (branch == CBranch::positive) ? std::sqrt(C1sq) : -std::sqrt(C1sq);
    behind.R = ahead.R * opv0 / opv1;
    return behind;
}

struct EosFields {
    double p, e, theta;
};

inline EosFields eos_fields(const GasConfig& cfg, double rho, double c) {
    if (rho < 0.0) throw validation_error("negative density");
    const double g = cfg.gamma;
    EosFields f;
    f.p = rho * c * c / g;
    f.e = c * c / (g * (g - 1.0));
    f.theta = f.e / ((g - 1.0) * cfg.cv);
    return f;
}

// Entropy integral R^(q+1-gamma) (C/x)^2 |1+V|^q, constant on smooth pieces.
// c_over_x lets callers pass the finite limit C/x -> L at the origin.
inline double entropy_integral(const GasConfig& cfg, const LambdaBinding& lam, double c_over_x,
                               double V, double R) {
    return std::pow(R, lam.q + 1.0 - cfg.gamma) * c_over_x * c_over_x *
           std::pow(std::abs(1.0 + V), lam.q);
}

// Invert the entropy integral for R given its constant on the piece.
inline double density_from_integral(const GasConfig& cfg, const LambdaBinding& lam, double K,
                                    double c_over_x, double V) {
    const double denom = c_over_x * c_over_x * std::pow(std::abs(1.0 + V), lam.q);
    return std::pow(K / denom, 1.0 / (lam.q + 1.0 - cfg.gamma));
}

}  // namespace simflow
