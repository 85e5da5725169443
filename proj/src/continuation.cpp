#include "simflow/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "simflow/interp.hpp"
#include "simflow/ode.hpp"

namespace simflow {

using Vec2 = Eigen::Vector2d;

std::pair<double, double> SeriesCoeffs::eval(double w) const {
    double V = 0.0, P = -1.0;
    double wi = 1.0;
    for (size_t i = 0; i < a.size(); ++i) {
        V += a[i] * wi;
        if (i + 1 < a.size()) P += b[i] * wi * w;
        wi *= w;
    }
    return {V, P / w};
}

namespace {

// dense truncated power series helpers (index = power of w)
using Poly = std::vector<double>;

Poly pmul(const Poly& u, const Poly& v) {
    Poly out(u.size(), 0.0);
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) continue;
        for (size_t j = 0; j + i < u.size(); ++j) out[i + j] += u[i] * v[j];
    }
    return out;
}

Poly pshift(const Poly& u, size_t k) {
    Poly out(u.size(), 0.0);
    for (size_t i = k; i < u.size(); ++i) out[i] = u[i - k];
    return out;
}

Poly paxpy(double alpha, const Poly& u, const Poly& v) {  // alpha*u + v
    Poly out(v);
    for (size_t i = 0; i < u.size(); ++i) out[i] += alpha * u[i];
    return out;
}

}  // namespace

SeriesCoeffs arc_b_series(const GasConfig& cfg, const LambdaBinding& lam, int N) {
    const double g = cfg.gamma, n = cfg.n, s = cfg.s, la = lam.lambda, sig = lam.sigma;
    const double e = 2.0 * (la - 1.0) / (g + s - 1.0);
    const double A2 = 1.0 + (n - 1.0) * (g - 1.0) / 2.0;
    const double A1 = ((n - 1.0) * (g - 1.0) + (g - 3.0) * (la - 1.0)) / 2.0;
    const double A0 = (g - 1.0) * (la - 1.0) / 2.0;
    const size_t M = static_cast<size_t>(N) + 3;

    Poly a(M, 0.0), b(M, 0.0);
    a[0] = lam.V0;

    // residuals of the two w-form equations, cleared of negative powers:
    //  r1: lam sig (wV') [w^2(1+V)^2 - P^2] - P^2(nV+e) + w^2 V(1+V)(lam+V)
    //  r2: lam sig (wP'-P)[w^2(1+V)^2 - P^2](1+V)
    //      - P { P^2 [(1+V) + s(lam-1)/g] - w^2(1+V)(A2(1+V)^2 - A1(1+V) + A0) }
    auto residuals = [&](const Poly& av, const Poly& bv, Poly& r1, Poly& r2) {
        Poly P(M, 0.0);
        P[0] = -1.0;
        for (size_t i = 1; i < M; ++i) P[i] = bv[i - 1];
        Poly onepV = av;
        onepV[0] += 1.0;
        Poly wVp(M, 0.0), wPp_m_P(M, 0.0);
        for (size_t i = 1; i < M; ++i) wVp[i] = static_cast<double>(i) * av[i];
        wPp_m_P[0] = 1.0;
        for (size_t i = 1; i < M; ++i) wPp_m_P[i] = static_cast<double>(i - 1) * bv[i - 1];
        const Poly P2 = pmul(P, P);
        const Poly br = paxpy(-1.0, P2, pshift(pmul(onepV, onepV), 2));
        Poly nVe = av;
        for (auto& x : nVe) x *= n;
        nVe[0] += e;
        Poly VL = av;
        VL[0] += la;
        r1 = paxpy(-1.0, pmul(P2, nVe), pmul(wVp, br));
        for (auto& x : r1) x *= 1.0;  // lam*sig applied below to lhs only
        // recompute with scaling: r1 = lam*sig*wVp*br - (P2*nVe - shift(V*(1+V)*(lam+V),2))
        Poly lhs1 = pmul(wVp, br);
        for (auto& x : lhs1) x *= la * sig;
        Poly rhs1 = paxpy(-1.0, pshift(pmul(av, pmul(onepV, VL)), 2), pmul(P2, nVe));
        r1 = paxpy(-1.0, rhs1, lhs1);

        Poly lhs2 = pmul(pmul(wPp_m_P, br), onepV);
        for (auto& x : lhs2) x *= la * sig;
        Poly inner = paxpy(s * (la - 1.0) / g, P2, pmul(P2, onepV));
        Poly poly = pmul(onepV, onepV);
        for (auto& x : poly) x *= A2;
        poly = paxpy(-A1, onepV, poly);
        poly[0] += A0;
        Poly rhs2 = pmul(P, paxpy(-1.0, pshift(pmul(onepV, poly), 2), inner));
        r2 = paxpy(-1.0, rhs2, lhs2);
    };

    SeriesCoeffs sc;
    Poly r10(M), r20(M), r1a(M), r2a(M), r1b(M), r2b(M);
    int reached = N;
    for (int k = 1; k <= N; ++k) {
        residuals(a, b, r10, r20);
        Poly aa = a;
        aa[k] = 1.0;
        residuals(aa, b, r1a, r2a);
        Poly bb = b;
        bb[k - 1] = 1.0;
        residuals(a, bb, r1b, r2b);
        // order-k residuals are affine in (a_k, b_{k-1})
        const double m11 = r1a[k] - r10[k], m12 = r1b[k] - r10[k];
        const double m21 = r2a[k] - r20[k], m22 = r2b[k] - r20[k];
        const double det = m11 * m22 - m12 * m21;
        if (std::abs(det) < 1e-12 * (std::abs(m11 * m22) + std::abs(m12 * m21) + 1e-300)) {
            reached = k - 1;  // resonance: stop at the last valid order
            break;
        }
        a[k] = (-r10[k] * m22 + r20[k] * m12) / det;
        b[k - 1] = (-m11 * r20[k] + m21 * r10[k]) / det;
    }
    sc.order = reached;
    sc.a.assign(a.begin(), a.begin() + reached + 1);
    sc.b.assign(b.begin(), b.begin() + reached);
    return sc;
}

PieceResult trace_arc_a(const GasConfig& cfg, const LambdaBinding& lam,
                        const SimilarityState& origin_launch, const SimOdeControls& ctl) {
    PieceResult pr = integrate_to_sonic_line(cfg, lam, origin_launch, ctl);
    if (pr.termination != EventKind::sonic_fold)
        throw integration_error("arc (a) did not reach the sonic line C = -(1+V)");
    return pr;
}

SimilarityState jump_locus_point(const GasConfig& cfg, const SimilarityState& st) {
    return rh_jump(cfg, st, CBranch::negative);
}

ArcB integrate_arc_b(const GasConfig& cfg, const LambdaBinding& lam, const SeriesCoeffs& sc,
                     double w_start, double w_max, const SimOdeControls& ctl) {
    OdeControls octl;
    octl.rtol = ctl.rtol;
    octl.atol = ctl.atol;
    octl.max_step = ctl.max_dxi;

    auto rhs = [&](double, const Vec2& y) {
        const auto f = eval_dgf(cfg, lam, y[0], y[1]);
        const double pre = 1.0 / (lam.lambda * lam.sigma * f.D);
        return Vec2(pre * f.G, pre * f.F);
    };
    std::vector<OdeEvent<2>> ev(1);
    // stop short of the sonic line: arc (b) lives strictly below it
    ev[0].value = [&](double, const Vec2& y) {
        return eval_dgf(cfg, lam, y[0], y[1]).D + 1e-4;
    };
    ev[0].direction = +1;

    ArcB arc;
    const auto seed = sc.eval(w_start);
    arc.lnw.push_back(std::log(w_start));
    arc.V.push_back(seed.first);
    arc.C.push_back(seed.second);
    auto obs = [&](double lnw, const Vec2& y, const DenseStep<2>&) {
        arc.lnw.push_back(lnw);
        arc.V.push_back(y[0]);
        arc.C.push_back(y[1]);
    };
    integrate_ode<2>(rhs, std::log(w_start), Vec2(seed.first, seed.second), std::log(w_max), octl,
                     ev, obs);
    return arc;
}

namespace {

struct ArcAInterp {
    PchipSpline V, C;
    double xi_lo, xi_hi;

    static ArcAInterp build(const TrajectoryPiece& p) {
        std::vector<double> xi(p.size());
        for (size_t i = 0; i < p.size(); ++i) xi[i] = std::log(p.x[i]);
        ArcAInterp out{PchipSpline(xi, p.V), PchipSpline(xi, p.C), xi.front(), xi.back()};
        return out;
    }
    Vec2 at(double xi) const { return Vec2(V(xi), C(xi)); }
};

}  // namespace

ShockFit fit_reflected_shock(const GasConfig& cfg, const LambdaBinding& lam,
                             const TrajectoryPiece& arc_a, double K_pre, const SeriesCoeffs& sc,
                             const SimOdeControls& ctl) {
    // series seed scale: default 1e-4, shrunk until the last kept term is tiny
    double w_start = 1e-4;
    {
        const double scale = std::abs(lam.V0) + 1.0;
        for (int i = 0; i < 20; ++i) {
            const double tail = std::abs(sc.a.back()) * std::pow(w_start, sc.order) +
                                std::abs(sc.b.empty() ? 0.0 : sc.b.back()) *
                                    std::pow(w_start, sc.order);
            if (tail < 1e-14 * scale) break;
            w_start *= 0.5;
        }
    }
    ArcB arc = integrate_arc_b(cfg, lam, sc, w_start, 50.0, ctl);
    PchipSpline bV(arc.lnw, arc.V), bC(arc.lnw, arc.C);

    const ArcAInterp aa = ArcAInterp::build(arc_a);
    auto locus = [&](double xia) {
        const Vec2 p = aa.at(xia);
        const SimilarityState j =
            jump_locus_point(cfg, SimilarityState{std::exp(xia), p[0], p[1], 1.0});
        return Vec2(j.V, j.C);
    };

    // sampled locus polyline for the side test
    const int NL = 3000;
    std::vector<double> lx(NL);
    std::vector<Vec2> lp(NL);
    for (int i = 0; i < NL; ++i) {
        lx[i] = aa.xi_lo + (aa.xi_hi - aa.xi_lo) * (i + 0.0) / (NL - 1);
        lp[i] = locus(lx[i]);
    }
    auto side_of = [&](const Vec2& p, int* seg = nullptr) {
        int best = 0;
        double bd = 1e300;
        for (int i = 0; i < NL; ++i) {
            const double d2 = (lp[i] - p).squaredNorm();
            if (d2 < bd) {
                bd = d2;
                best = i;
            }
        }
        const int i0 = std::min(std::max(best, 0), NL - 2);
        if (seg) *seg = i0;
        const Vec2 t = lp[i0 + 1] - lp[i0];
        const Vec2 dlt = p - lp[i0];
        return t[0] * dlt[1] - t[1] * dlt[0];
    };

    // bracket the crossing along arc (b)
    double prev = side_of(Vec2(arc.V[0], arc.C[0]));
    double lo = arc.lnw[0], hi = 0.0;
    bool found = false;
    for (size_t i = 1; i < arc.lnw.size(); ++i) {
        const double cur = side_of(Vec2(arc.V[i], arc.C[i]));
        if (prev != 0.0 && cur != 0.0 && (prev > 0) != (cur > 0)) {
            lo = arc.lnw[i - 1];
            hi = arc.lnw[i];
            found = true;
            break;
        }
        prev = cur;
    }
    if (!found)
        throw integration_error(
            "arc (b) does not intersect the jump locus: wrong lambda or integration fault");

    const double slo = side_of(Vec2(bV(lo), bC(lo)));
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double sm = side_of(Vec2(bV(mid), bC(mid)));
        if ((sm > 0) == (slo > 0))
            lo = mid;
        else
            hi = mid;
    }
    const double lnw1 = 0.5 * (lo + hi);

    ShockFit fit;
    fit.series = sc;
    fit.w1 = std::exp(lnw1);
    fit.post_V = bV(lnw1);
    fit.post_C = bC(lnw1);

    // involution: the same jump relations map the post-state back to arc (a)
    SimilarityState post{1.0, fit.post_V, fit.post_C, 1.0};
    // rh_jump requires an admissible (supersonic) input; the inverse map is the
    // same algebra without the admissibility gate
    const double g = cfg.gamma;
    const double opv1 = 1.0 + fit.post_V;
    const double opv0 =
        (g - 1.0) / (g + 1.0) * opv1 + 2.0 * fit.post_C * fit.post_C / ((g + 1.0) * opv1);
    const double C0sq =
        fit.post_C * fit.post_C + (g - 1.0) / 2.0 * (opv1 * opv1 - opv0 * opv0);
    fit.pre_V = opv0 - 1.0;
    fit.pre_C = -std::sqrt(C0sq);

    // read B off arc (a): nearest point of the interpolated arc to the pre-state
    const Vec2 target(fit.pre_V, fit.pre_C);
    double blo = aa.xi_lo, bhi = aa.xi_hi;
    {
        int bi = 0;
        double bd = 1e300;
        const int NS = 4000;
        for (int i = 0; i < NS; ++i) {
            const double xi = aa.xi_lo + (aa.xi_hi - aa.xi_lo) * i / (NS - 1.0);
            const double d2 = (aa.at(xi) - target).squaredNorm();
            if (d2 < bd) {
                bd = d2;
                bi = i;
            }
        }
        blo = aa.xi_lo + (aa.xi_hi - aa.xi_lo) * std::max(0, bi - 2) / (NS - 1.0);
        bhi = aa.xi_lo + (aa.xi_hi - aa.xi_lo) * std::min(NS - 1, bi + 2) / (NS - 1.0);
    }
    const double grat = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = bhi - grat * (bhi - blo), d1 = blo + grat * (bhi - blo);
    auto dist2 = [&](double xi) { return (aa.at(xi) - target).squaredNorm(); };
    for (int it = 0; it < 200 && bhi - blo > 1e-13; ++it) {
        if (dist2(c1) < dist2(d1))
            bhi = d1;
        else
            blo = c1;
        c1 = bhi - grat * (bhi - blo);
        d1 = blo + grat * (bhi - blo);
    }
    const double xiB = 0.5 * (blo + bhi);
    fit.B = std::exp(xiB);
    fit.k = std::pow(fit.B, lam.sigma) * fit.w1;

    fit.R_pre = density_from_integral(cfg, lam, K_pre, fit.pre_C / fit.B, fit.pre_V);
    fit.R_post = fit.R_pre * (1.0 + fit.pre_V) / (1.0 + fit.post_V);

    if (!(fit.pre_C * fit.pre_C < (1.0 + fit.pre_V) * (1.0 + fit.pre_V)))
        throw integration_error("reflected-shock pre-state is not supersonic");
    if (!(fit.post_C * fit.post_C > (1.0 + fit.post_V) * (1.0 + fit.post_V)))
        throw integration_error("reflected-shock post-state is not subsonic");
    return fit;
}

AsymptoticsReport asymptotics_check(const SolutionCase& sc, double x_lo, double x_hi) {
    const auto& p = sc.traj.pieces.back();
    if (x_hi <= 0.0) x_hi = p.x.back();
    if (x_lo <= 0.0) x_lo = x_hi / 10.0;

    std::vector<double> lx, lC, lR, lRC2;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p.x[i] < x_lo || p.x[i] > x_hi) continue;
        lx.push_back(std::log(p.x[i]));
        lC.push_back(std::log(std::abs(p.C[i])));
        lR.push_back(std::log(p.R[i]));
        lRC2.push_back(std::log(p.R[i] * (p.C[i] / p.x[i]) * (p.C[i] / p.x[i])));
    }
    if (lx.size() < 8) throw integration_error("not enough far-field nodes; extend integration");

    auto slope = [&](const std::vector<double>& ly) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double nn = static_cast<double>(lx.size());
        for (size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    };

    AsymptoticsReport rep;
    rep.x_lo = x_lo;
    rep.x_hi = x_hi;
    rep.sigma_fitted = slope(lC);
    rep.sigma_predicted = sc.lam.sigma;
    rep.R_exp_fitted = slope(lR);
    rep.R_exp_predicted =
        -(2.0 / (sc.cfg.gamma - sc.lam.q)) * (1.0 - 1.0 / sc.lam.lambda);
    rep.RC2_exp_fitted = slope(lRC2);
    rep.RC2_exp_predicted = -2.0 * (1.0 - 1.0 / sc.lam.lambda);
    rep.V_far = p.V.back();
    rep.V0 = sc.lam.V0;
    return rep;
}

namespace {

// entropy constant of the pre-collapse piece
double pre_collapse_constant(const GasConfig& cfg, const LambdaBinding& lam,
                             const SimilarityState& launch) {
    return entropy_integral(cfg, lam, launch.C / launch.x, launch.V, launch.R);
}

}  // namespace

SolutionCase build_case_with_lambda(const GasConfig& cfg, double lambda, const SimOdeControls& ctl,
                                    int series_order) {
    cfg.validate();
    SolutionCase sol;
    sol.cfg = cfg;
    sol.controls = ctl;
    sol.lam = bind_lambda(cfg, lambda);

    const SimilarityState launch = launch_state(cfg, sol.lam, ctl);
    sol.K_pre = pre_collapse_constant(cfg, sol.lam, launch);

    // piece 1: launch -> sonic crossing
    PieceResult p1 = integrate_piece(cfg, sol.lam, launch, 0.0, ctl);
    if (p1.termination != EventKind::critical_crossing)
        throw integration_error("pre-collapse piece did not cross the sonic line analytically (" +
                                to_string(p1.termination) + ")");
    const CrossingInfo ci = cross_critical(cfg, sol.lam, p1, ctl);

    // piece 2: crossing -> origin
    PieceResult p2 = integrate_piece(cfg, sol.lam, ci.relaunched, 0.0, ctl);
    if (p2.termination != EventKind::origin)
        throw integration_error("post-crossing piece did not reach the origin");
    const OriginInfo oi = cross_origin(cfg, sol.lam, p2.piece, ctl);
    sol.ell = oi.ell;
    sol.L = oi.L;
    sol.R0 = density_from_integral(cfg, sol.lam, sol.K_pre, sol.L, 0.0);

    // arc (a) to the sonic line, then the reflected shock
    PieceResult pa = trace_arc_a(cfg, sol.lam, oi.relaunched, ctl);
    SeriesCoeffs sc = arc_b_series(cfg, sol.lam, series_order);
    sol.fit = fit_reflected_shock(cfg, sol.lam, pa.piece, sol.K_pre, sc, ctl);

    // assemble trajectory pieces (solution truncated at x = B)
    reconstruct_density(cfg, sol.lam, sol.K_pre, p1.piece);
    reconstruct_density(cfg, sol.lam, sol.K_pre, p2.piece);
    reconstruct_density(cfg, sol.lam, sol.K_pre, pa.piece);
    sol.arc_a_full = pa.piece;

    TrajectoryPiece p3;  // (0, B]
    for (size_t i = 0; i < pa.piece.size(); ++i) {
        if (pa.piece.x[i] >= sol.fit.B) break;
        p3.x.push_back(pa.piece.x[i]);
        p3.V.push_back(pa.piece.V[i]);
        p3.C.push_back(pa.piece.C[i]);
    }
    p3.x.push_back(sol.fit.B);
    p3.V.push_back(sol.fit.pre_V);
    p3.C.push_back(sol.fit.pre_C);
    reconstruct_density(cfg, sol.lam, sol.K_pre, p3);

    sol.K_post = entropy_integral(cfg, sol.lam, sol.fit.post_C / sol.fit.B, sol.fit.post_V,
                                  sol.fit.R_post);
    ArcB arcb = integrate_arc_b(cfg, sol.lam, sol.fit.series,
                                std::min(1e-4, sol.fit.k * std::pow(1e7, -sol.lam.sigma)), 50.0,
                                ctl);
    TrajectoryPiece p4;  // [B, x_last], from w decreasing
    p4.x.push_back(sol.fit.B);
    p4.V.push_back(sol.fit.post_V);
    p4.C.push_back(sol.fit.post_C);
    for (size_t ii = arcb.lnw.size(); ii-- > 0;) {
        const double w = std::exp(arcb.lnw[ii]);
        if (w >= sol.fit.w1) continue;
        const double x = std::pow(sol.fit.k / w, 1.0 / sol.lam.sigma);
        if (x <= p4.x.back()) continue;
        p4.x.push_back(x);
        p4.V.push_back(arcb.V[ii]);
        p4.C.push_back(arcb.C[ii]);
    }
    reconstruct_density(cfg, sol.lam, sol.K_post, p4);

    sol.traj.pieces = {p1.piece, p2.piece, p3, p4};
    sol.traj.events = {{EventKind::incoming_shock, -1.0},
                       {EventKind::critical_crossing, ci.x_c},
                       {EventKind::origin, 0.0},
                       {EventKind::reflected_shock, sol.fit.B},
                       {EventKind::asymptote, p4.x.back()}};
    return sol;
}

SolutionCase build_case(const GasConfig& cfg, const SimOdeControls& ctl, double shoot_tol,
                        int series_order) {
    ShootResult sr = solve_lambda(cfg, default_bracket(cfg), shoot_tol, ctl);
    SolutionCase sol = build_case_with_lambda(cfg, sr.lambda_std, ctl, series_order);
    sol.shoot = sr;
    return sol;
}

}  // namespace simflow
