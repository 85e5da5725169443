#include "simflow/sim_ode.hpp"

#include <algorithm>
#include <cmath>

#include "simflow/ode.hpp"

namespace simflow {

using Vec2 = Eigen::Vector2d;

std::pair<double, double> rhs(const GasConfig& cfg, const LambdaBinding& lam, double x, double V,
                              double C) {
    if (x == 0.0) throw singular_evaluation_error("rhs at x = 0 (use the origin crossing)");
    const auto f = eval_dgf(cfg, lam, V, C);
    if (f.D == 0.0) throw singular_evaluation_error("rhs on the sonic line D = 0");
    const double pre = -1.0 / (lam.lambda * x * f.D);
    return {pre * f.G, pre * f.F};
}

SonicPoints sonic_points(const GasConfig& cfg, const LambdaBinding& lam) {
    // G(V, 1+V) = (1+V) g(V) with g(V) = (n-1)V^2 + (n+e-lambda)V + e,
    // and F is proportional to G along the line, so zeros of g are the
    // common zeros.
    const double e = 2.0 * (lam.lambda - 1.0) / (cfg.gamma + cfg.s - 1.0);
    const double a = cfg.n - 1.0;
    const double b = cfg.n + e - lam.lambda;
    const double c = e;
    SonicPoints sp;
    sp.v_merged = -b / (2.0 * a);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return sp;
    sp.real = true;
    const double sq = std::sqrt(disc);
    sp.v_lo = (-b - sq) / (2.0 * a);
    sp.v_hi = (-b + sq) / (2.0 * a);
    return sp;
}

std::pair<double, double> crossing_slopes(const GasConfig& cfg, const LambdaBinding& lam,
                                          double Vc, double Cc) {
    const auto j = eval_dgf_jacobian(cfg, lam, Vc, Cc);
    const double a = j.GC, b = j.GV - j.FC, c = -j.FV;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0)
        throw integration_error("no real branch slopes at the sonic point (disc < 0)");
    const double sq = std::sqrt(disc);
    return {(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)};
}

namespace {

Vec2 xi_rhs(const GasConfig& cfg, const LambdaBinding& lam, const Vec2& y) {
    const auto f = eval_dgf(cfg, lam, y[0], y[1]);
    const double pre = -1.0 / (lam.lambda * f.D);
    return Vec2(pre * f.G, pre * f.F);
}

double nearest_zero_distance(const GasConfig& cfg, const LambdaBinding& lam, double V, double C) {
    const SonicPoints sp = sonic_points(cfg, lam);
    if (!sp.real) return std::hypot(V - sp.v_merged, C - (1.0 + sp.v_merged));
    return std::min(std::hypot(V - sp.v_lo, C - (1.0 + sp.v_lo)),
                    std::hypot(V - sp.v_hi, C - (1.0 + sp.v_hi)));
}

}  // namespace

PieceResult integrate_piece(const GasConfig& cfg, const LambdaBinding& lam,
                            const SimilarityState& start, double x_end,
                            const SimOdeControls& ctl) {
    if (start.x == 0.0) throw validation_error("integrate_piece cannot start at x = 0");
    const double sgn = start.x > 0.0 ? 1.0 : -1.0;
    if (x_end != 0.0 && sgn * x_end <= 0.0)
        throw validation_error("integrate_piece cannot cross x = 0; split at the origin");

    const double xi0 = std::log(std::abs(start.x));
    const double xi1 = (x_end == 0.0) ? std::log(ctl.eps_0) : std::log(std::abs(x_end));

    OdeControls octl;
    octl.rtol = ctl.rtol;
    octl.atol = ctl.atol;
    octl.max_step = ctl.max_dxi;

    std::vector<OdeEvent<2>> events(2);
    events[0].value = [&](double, const Vec2& y) {
        return eval_dgf(cfg, lam, y[0], y[1]).D;
    };
    events[0].direction = 0;
    events[1].value = [&](double, const Vec2& y) { return ctl.c_guard - std::abs(y[1]); };
    events[1].direction = -1;

    PieceResult out;
    out.piece.x.push_back(start.x);
    out.piece.V.push_back(start.V);
    out.piece.C.push_back(start.C);
    auto observer = [&](double xi, const Vec2& y, const DenseStep<2>&) {
        out.piece.x.push_back(sgn * std::exp(xi));
        out.piece.V.push_back(y[0]);
        out.piece.C.push_back(y[1]);
    };

    auto term = integrate_ode<2>(
        [&](double, const Vec2& y) { return xi_rhs(cfg, lam, y); }, xi0, Vec2(start.V, start.C),
        xi1, octl, events, observer);

    out.end = {sgn * std::exp(term.t), term.y[0], term.y[1], 0.0};
    // ensure terminal node is recorded exactly once
    if (out.piece.x.back() != out.end.x) {
        out.piece.x.push_back(out.end.x);
        out.piece.V.push_back(out.end.V);
        out.piece.C.push_back(out.end.C);
    } else {
        out.piece.V.back() = out.end.V;
        out.piece.C.back() = out.end.C;
    }

    switch (term.status) {
        case OdeStatus::reached_end:
            out.termination = (x_end == 0.0) ? EventKind::origin : EventKind::reached_end;
            break;
        case OdeStatus::event:
            if (term.event_index == 1) {
                out.termination = EventKind::asymptote;
            } else {
                const double dz = nearest_zero_distance(cfg, lam, out.end.V, out.end.C);
                out.termination =
                    (dz < ctl.zero_tol) ? EventKind::critical_crossing : EventKind::sonic_fold;
            }
            break;
        case OdeStatus::step_failure: {
            const auto f = eval_dgf(cfg, lam, out.end.V, out.end.C);
            if (std::abs(f.D) < 1e-2)
                out.termination = EventKind::sonic_fold;
            else
                throw integration_error("step-size collapse away from singular sets at x = " +
                                        std::to_string(out.end.x));
            break;
        }
    }

    // x must increase along the stored piece
    if (out.piece.x.front() > out.piece.x.back()) {
        std::reverse(out.piece.x.begin(), out.piece.x.end());
        std::reverse(out.piece.V.begin(), out.piece.V.end());
        std::reverse(out.piece.C.begin(), out.piece.C.end());
    }
    return out;
}

PieceResult integrate_to_sonic_line(const GasConfig& cfg, const LambdaBinding& lam,
                                    const SimilarityState& start, const SimOdeControls& ctl) {
    if (start.x <= 0.0) throw validation_error("arc (a) lives on x > 0");

    OdeControls octl;
    octl.rtol = ctl.rtol;
    octl.atol = ctl.atol;
    octl.max_step = ctl.max_dxi;

    // phase 1: xi-parametrized until D drops to d_endgame
    std::vector<OdeEvent<2>> events(2);
    events[0].value = [&](double, const Vec2& y) {
        return eval_dgf(cfg, lam, y[0], y[1]).D - ctl.d_endgame;
    };
    events[0].direction = -1;
    events[1].value = [&](double, const Vec2& y) { return ctl.c_guard - std::abs(y[1]); };
    events[1].direction = -1;

    PieceResult out;
    out.piece.x.push_back(start.x);
    out.piece.V.push_back(start.V);
    out.piece.C.push_back(start.C);
    auto observer = [&](double xi, const Vec2& y, const DenseStep<2>&) {
        out.piece.x.push_back(std::exp(xi));
        out.piece.V.push_back(y[0]);
        out.piece.C.push_back(y[1]);
    };
    auto term = integrate_ode<2>(
        [&](double, const Vec2& y) { return xi_rhs(cfg, lam, y); }, std::log(start.x),
        Vec2(start.V, start.C), 80.0, octl, events, observer);

    if (term.status != OdeStatus::event || term.event_index != 0)
        throw integration_error("arc (a) failed to approach the sonic line C = -(1+V)");

    // phase 2: V-parametrized through the fold, state (C, xi)
    const Vec2 ysw = term.y;
    const double xisw = term.t;
    if (out.piece.x.back() != std::exp(xisw)) {
        out.piece.x.push_back(std::exp(xisw));
        out.piece.V.push_back(ysw[0]);
        out.piece.C.push_back(ysw[1]);
    }
    const auto fsw = eval_dgf(cfg, lam, ysw[0], ysw[1]);
    const double vdir = (-fsw.G / fsw.D) > 0.0 ? 1.0 : -1.0;  // sign of dV/dxi, xi increasing

    auto vrhs = [&](double V, const Vec2& z) {
        const auto f = eval_dgf(cfg, lam, V, z[0]);
        return Vec2(f.F / f.G, -lam.lambda * f.D / f.G);
    };
    std::vector<OdeEvent<2>> ev2(1);
    ev2[0].value = [&](double V, const Vec2& z) { return eval_dgf(cfg, lam, V, z[0]).D; };
    ev2[0].direction = -1;

    OdeControls octl2 = octl;
    octl2.max_step = 1e-3;
    auto obs2 = [&](double V, const Vec2& z, const DenseStep<2>&) {
        out.piece.x.push_back(std::exp(z[1]));
        out.piece.V.push_back(V);
        out.piece.C.push_back(z[0]);
    };
    auto t2 = integrate_ode<2>(vrhs, ysw[0], Vec2(ysw[1], xisw), ysw[0] + vdir * 1.0, octl2, ev2,
                               obs2);
    if (t2.status != OdeStatus::event)
        throw integration_error("arc (a) endgame did not reach the sonic line");

    out.end = {std::exp(t2.y[1]), t2.t, t2.y[0], 0.0};
    if (out.piece.x.back() != out.end.x) {
        out.piece.x.push_back(out.end.x);
        out.piece.V.push_back(out.end.V);
        out.piece.C.push_back(out.end.C);
    }
    out.termination = EventKind::sonic_fold;

    // x increases along phase 1 then stalls at the fold; drop any non-monotone
    // tail nodes so the stored grid stays strictly increasing.
    size_t keep = 1;
    for (size_t i = 1; i < out.piece.x.size(); ++i) {
        if (out.piece.x[i] > out.piece.x[keep - 1]) {
            out.piece.x[keep] = out.piece.x[i];
            out.piece.V[keep] = out.piece.V[i];
            out.piece.C[keep] = out.piece.C[i];
            ++keep;
        }
    }
    out.piece.x.resize(keep);
    out.piece.V.resize(keep);
    out.piece.C.resize(keep);
    return out;
}

CrossingInfo cross_critical(const GasConfig& cfg, const LambdaBinding& lam,
                            const PieceResult& approach, const SimOdeControls& ctl) {
    const SonicPoints sp = sonic_points(cfg, lam);
    const double Ve = approach.end.V, Ce = approach.end.C;
    auto f_end = eval_dgf(cfg, lam, Ve, Ce);
    if (!sp.real || std::hypot(f_end.F, f_end.G) > 0.05 ||
        nearest_zero_distance(cfg, lam, Ve, Ce) > ctl.zero_tol)
        throw integration_error(
            "sonic-line hit is not at a common zero of F and G (shooting residual)");
    const double Vz = (std::abs(Ve - sp.v_lo) < std::abs(Ve - sp.v_hi)) ? sp.v_lo : sp.v_hi;
    const double Cz = 1.0 + Vz;

    const auto slopes = crossing_slopes(cfg, lam, Vz, Cz);

    // incoming slope and direction of motion from the last stored nodes;
    // the piece is ordered by increasing x, the hit is at one of the ends
    const auto& p = approach.piece;
    const size_t nn = p.size();
    size_t ie, ip;
    if (std::abs(p.x[nn - 1] - approach.end.x) <= std::abs(p.x[0] - approach.end.x)) {
        ie = nn - 1;
        ip = nn - 2;
    } else {
        ie = 0;
        ip = 1;
    }
    const Vec2 motion(p.V[ie] - p.V[ip], p.C[ie] - p.C[ip]);
    const double slope_in = motion[1] / motion[0];
    const double tau = (std::abs(slopes.first - slope_in) < std::abs(slopes.second - slope_in))
                           ? slopes.first
                           : slopes.second;

    Vec2 dir(1.0, tau);
    dir.normalize();
    if (dir.dot(motion) < 0.0) dir = -dir;

    const auto j = eval_dgf_jacobian(cfg, lam, Vz, Cz);
    const double hstar =
        -lam.lambda * (j.DV * dir[0] + j.DC * dir[1]) / (j.GV * dir[0] + j.GC * dir[1]);

    const Vec2 y_out = Vec2(Vz, Cz) + ctl.eps_c * dir;
    const double dxi = (y_out[0] - Ve) * hstar;
    const double sgn = approach.end.x > 0.0 ? 1.0 : -1.0;
    const double x_out = sgn * std::exp(std::log(std::abs(approach.end.x)) + dxi);

    CrossingInfo ci;
    ci.relaunched = {x_out, y_out[0], y_out[1], 0.0};
    ci.Vz = Vz;
    ci.Cz = Cz;
    ci.slope = tau;
    ci.incoming_slope = slope_in;
    ci.x_c = approach.end.x;
    return ci;
}

OriginInfo cross_origin(const GasConfig& cfg, const LambdaBinding& lam,
                        const TrajectoryPiece& approach, const SimOdeControls& ctl) {
    (void)cfg;
    (void)lam;
    // approach stores x increasing toward 0^-: the smallest |x| is last
    const size_t nn = approach.size();
    if (nn < 8) throw integration_error("origin approach has too few nodes");
    if (!(approach.x.back() < 0.0 && std::abs(approach.x.back()) <= ctl.eps_0 * 1.0000001))
        throw integration_error("origin approach does not end at |x| = eps_0");

    // sample nodes on a ~half-decade ladder up from the end
    std::vector<double> xs, vs, cs;
    const double step = std::log(10.0) / 2.0;
    size_t idx = nn - 1;
    for (int k = 0; k < 6; ++k) {
        // xi = log|x| increases toward smaller indices
        const double xi_target = std::log(std::abs(approach.x.back())) + k * step;
        while (idx > 0 && std::log(std::abs(approach.x[idx])) < xi_target) --idx;
        if (!xs.empty() && approach.x[idx] == xs.back()) continue;
        xs.push_back(approach.x[idx]);
        vs.push_back(approach.V[idx] / approach.x[idx]);
        cs.push_back(approach.C[idx] / approach.x[idx]);
        if (idx == 0) break;
    }
    if (xs.size() < 4) throw integration_error("origin extrapolation ladder too short");

    OriginInfo oi;
    oi.ell = extrapolate_to_zero(xs, vs);
    oi.L = extrapolate_to_zero(xs, cs);
    if (!std::isfinite(oi.ell) || !std::isfinite(oi.L))
        throw integration_error("origin-crossing extrapolation did not converge");
    oi.relaunched = {ctl.eps_0, oi.ell * ctl.eps_0, oi.L * ctl.eps_0, 0.0};
    return oi;
}

void reconstruct_density(const GasConfig& cfg, const LambdaBinding& lam, double K,
                         TrajectoryPiece& piece) {
    piece.entropy_const = K;
    piece.R.resize(piece.size());
    for (size_t i = 0; i < piece.size(); ++i) {
        const double cx = piece.C[i] / piece.x[i];
        piece.R[i] = density_from_integral(cfg, lam, K, cx, piece.V[i]);
    }
}

double dlnR_dxi(const GasConfig& cfg, const LambdaBinding& lam, double V, double C) {
    const auto f = eval_dgf(cfg, lam, V, C);
    const double xVp = -f.G / (lam.lambda * f.D);  // dV/dxi
    return ((lam.kappa + cfg.n) * V / lam.lambda - xVp) / (1.0 + V);
}

}  // namespace simflow
