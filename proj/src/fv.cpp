#include "simflow/fv.hpp"

#include <algorithm>
#include <cmath>

namespace simflow {

namespace {

using Vec3 = Eigen::Vector3d;

Vec3 prim_to_cons(double gamma, const Vec3& w) {
    const double rho = w[0], u = w[1], p = w[2];
    return Vec3(rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u);
}

Vec3 cons_to_prim(double gamma, const Vec3& q, const FvControls& ctl) {
    const double rho = std::max(q[0], ctl.density_floor);
    const double u = q[1] / rho;
    const double p = std::max((gamma - 1.0) * (q[2] - 0.5 * rho * u * u), ctl.pressure_floor);
    return Vec3(rho, u, p);
}

Vec3 flux_of(double gamma, const Vec3& w) {
    const double rho = w[0], u = w[1], p = w[2];
    const double E = p / (gamma - 1.0) + 0.5 * rho * u * u;
    return Vec3(rho * u, rho * u * u + p, (E + p) * u);
}

double minmod3(double a, double b, double c) {
    if (a > 0 && b > 0 && c > 0) return std::min({a, b, c});
    if (a < 0 && b < 0 && c < 0) return std::max({a, b, c});
    return 0.0;
}

}  // namespace

Vec3 hllc_flux(double gamma, const Vec3& wl, const Vec3& wr) {
    const double rl = wl[0], ul = wl[1], pl = wl[2];
    const double rr = wr[0], ur = wr[1], pr = wr[2];
    const double cl = std::sqrt(gamma * pl / rl), cr = std::sqrt(gamma * pr / rr);

    const double sl = std::min(ul - cl, ur - cr);
    const double sr = std::max(ul + cl, ur + cr);
    if (sl >= 0.0) return flux_of(gamma, wl);
    if (sr <= 0.0) return flux_of(gamma, wr);

    const double al = rl * (sl - ul), ar = rr * (sr - ur);
    const double sc = (pl - pr + ar * ur - al * ul) / (ar - al);

    const Vec3 ql = prim_to_cons(gamma, wl), qr = prim_to_cons(gamma, wr);
    if (sc >= 0.0) {
        const double rs = al / (sl - sc);
        Vec3 qs;
        qs[0] = rs;
        qs[1] = rs * sc;
        qs[2] = rs * (ql[2] / rl + (sc - ul) * (sc + pl / al));
        return flux_of(gamma, wl) + sl * (qs - ql);
    }
    const double rs = ar / (sr - sc);
    Vec3 qs;
    qs[0] = rs;
    qs[1] = rs * sc;
    qs[2] = rs * (qr[2] / rr + (sc - ur) * (sc + pr / ar));
    return flux_of(gamma, wr) + sr * (qs - qr);
}

RadialGrid init_from_similarity(const FlowField& ff, double t_start, double r_min, double r_max,
                                int n_cells, const FvControls& ctl) {
    if (!(r_min > 0.0)) throw validation_error("the FV grid must stay away from r = 0");
    if (t_start == 0.0) throw validation_error("cannot initialize at the collapse instant");
    RadialGrid g;
    g.r_min = r_min;
    g.r_max = r_max;
    g.n_cells = n_cells;
    g.gamma = ff.solution().cfg.gamma;
    g.m = ff.solution().cfg.m();
    g.time = t_start;
    g.rho.resize(n_cells);
    g.mom.resize(n_cells);
    g.ene.resize(n_cells);

    // 3-point Gauss cell averages of the r^m-weighted conserved fields
    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    for (int i = 0; i < n_cells; ++i) {
        const double a = g.edge(i), b = g.edge(i + 1);
        Vec3 acc = Vec3::Zero();
        double vol = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[k];
            const double w = gw[k] * 0.5 * (b - a) * std::pow(r, g.m);
            const FlowSample s = ff.sample(t_start, r);
            const double rho = std::max(s.rho, ctl.density_floor);
            const double p = std::max(s.p, ctl.pressure_floor);
            acc += w * prim_to_cons(g.gamma, Vec3(rho, s.u, p));
            vol += w;
        }
        acc /= vol;
        g.rho[i] = acc[0];
        g.mom[i] = acc[1];
        g.ene[i] = acc[2];
    }
    return g;
}

AdvanceStats advance(RadialGrid& g, const FlowField& ff, double t_end, const FvControls& ctl) {
    const int n = g.n_cells;
    const double dr = g.dr();
    const double gamma = g.gamma;
    AdvanceStats stats;

    auto boundary_prim = [&](double t, double r) {
        const FlowSample s = ff.sample(t, r);
        return Vec3(std::max(s.rho, ctl.density_floor), s.u, std::max(s.p, ctl.pressure_floor));
    };

    Eigen::ArrayXd rho0, mom0, ene0;
    std::vector<Vec3> w(n + 4), wl(n + 4), wr(n + 4);  // with 2 ghost cells per side
    std::vector<double> ph(n + 4);                     // half-step cell pressure (source term)
    std::vector<Vec3> fl(n + 1);

    while (g.time < t_end) {
        // primitive states incl. ghosts
        for (int i = 0; i < n; ++i)
            w[i + 2] = cons_to_prim(gamma, Vec3(g.rho[i], g.mom[i], g.ene[i]), ctl);
        w[0] = boundary_prim(g.time, g.r_min - 1.5 * dr);
        w[1] = boundary_prim(g.time, g.r_min - 0.5 * dr);
        w[n + 2] = boundary_prim(g.time, g.r_max + 0.5 * dr);
        w[n + 3] = boundary_prim(g.time, g.r_max + 1.5 * dr);

        double max_speed = 1e-12;
        for (int i = 0; i < n; ++i) {
            const Vec3& p = w[i + 2];
            max_speed = std::max(max_speed, std::abs(p[1]) + std::sqrt(gamma * p[2] / p[0]));
        }
        double dt = ctl.cfl * dr / max_speed;
        dt = std::min(dt, t_end - g.time);

        rho0 = g.rho;
        mom0 = g.mom;
        ene0 = g.ene;
        const double t0 = g.time;

        bool ok = false;
        for (int attempt = 0; attempt < 30 && !ok; ++attempt) {
            // MUSCL-Hancock: limited slopes + half-step predictor
            for (int i = 1; i < n + 3; ++i) {
                Vec3 slope;
                for (int q = 0; q < 3; ++q)
                    slope[q] = minmod3(ctl.plm_theta * (w[i][q] - w[i - 1][q]),
                                       0.5 * (w[i + 1][q] - w[i - 1][q]),
                                       ctl.plm_theta * (w[i + 1][q] - w[i][q]));
                // half-step predictor in primitive variables; slopes are per cell
                const double rho = w[i][0], u = w[i][1], p = w[i][2];
                const double drho = slope[0] / dr, du = slope[1] / dr, dp = slope[2] / dr;
                Vec3 dwdt(-(u * drho + rho * du), -(u * du + dp / rho),
                          -(u * dp + gamma * p * du));
                // geometric part of the divergence: m u / r terms
                const double rc = g.r_min + (i - 1.5) * dr;
                if (rc > 0.0) {
                    dwdt[0] -= rho * g.m * u / rc;
                    dwdt[2] -= gamma * p * g.m * u / rc;
                }
                Vec3 wm = w[i] - 0.5 * slope + 0.5 * dt * dwdt;
                Vec3 wp = w[i] + 0.5 * slope + 0.5 * dt * dwdt;
                wm[0] = std::max(wm[0], ctl.density_floor);
                wp[0] = std::max(wp[0], ctl.density_floor);
                wm[2] = std::max(wm[2], ctl.pressure_floor);
                wp[2] = std::max(wp[2], ctl.pressure_floor);
                wl[i] = wm;
                wr[i] = wp;
                ph[i] = std::max(p + 0.5 * dt * dwdt[2], ctl.pressure_floor);
            }
            for (int i = 0; i <= n; ++i) fl[i] = hllc_flux(gamma, wr[i + 1], wl[i + 2]);

            ok = true;
            for (int i = 0; i < n; ++i) {
                const double a = g.edge(i), b = g.edge(i + 1);
                const double am = std::pow(a, g.m), bm = std::pow(b, g.m);
                const double vol = g.volume(i);
                const Vec3 q0(rho0[i], mom0[i], ene0[i]);
                Vec3 q = q0 - dt / vol * (bm * fl[i + 1] - am * fl[i]);
                // well-balanced geometric source: momentum only
                q[1] += dt / vol * ph[i + 2] * (bm - am);
                if (q[0] <= 0.0 || q[2] - 0.5 * q[1] * q[1] / q[0] <= 0.0) {
                    ok = false;
                    break;
                }
                g.rho[i] = q[0];
                g.mom[i] = q[1];
                g.ene[i] = q[2];
            }
            if (!ok) {
                dt *= 0.5;
                g.rho = rho0;
                g.mom = mom0;
                g.ene = ene0;
                ++stats.floor_activations;
                if (dt < 1e-15)
                    throw integration_error("FV positivity failure persists at t = " +
                                            std::to_string(g.time));
            }
        }
        if (!ok) throw integration_error("FV step rejected 30 times at t = " + std::to_string(t0));

        const double am = std::pow(g.r_min, g.m), bm = std::pow(g.r_max, g.m);
        stats.boundary_mass_flux += dt * (am * fl[0][0] - bm * fl[n][0]);
        g.time = t0 + dt;
        ++stats.steps;
    }
    return stats;
}

ErrorNorms error_norms(const RadialGrid& g, const FlowField& ff, double t) {
    ErrorNorms e;
    double norm_rho = 0.0;
    FvControls ctl;
    for (int i = 0; i < g.n_cells; ++i) {
        const double r = g.center(i);
        const double vol = g.volume(i);
        const FlowSample s = ff.sample(t, r);
        if (s.rho <= 10.0 * ctl.density_floor) continue;  // floored vacuum cells excluded
        const Vec3 w = cons_to_prim(g.gamma, Vec3(g.rho[i], g.mom[i], g.ene[i]), ctl);
        e.l1_rho += std::abs(w[0] - s.rho) * vol;
        e.l1_u += std::abs(w[1] - s.u) * vol;
        e.l1_p += std::abs(w[2] - s.p) * vol;
        e.linf_rho = std::max(e.linf_rho, std::abs(w[0] - s.rho));
        e.linf_u = std::max(e.linf_u, std::abs(w[1] - s.u));
        e.linf_p = std::max(e.linf_p, std::abs(w[2] - s.p));
        norm_rho += s.rho * vol;
    }
    e.l1_rho_rel = e.l1_rho / norm_rho;

    // captured shock position: steepest density slope near the exact path
    double r_exact = 0.0;
    if (t < 0.0)
        r_exact = ff.incoming_shock_radius(t);
    else if (t > 0.0)
        r_exact = ff.outgoing_shock_radius(t);
    if (r_exact > g.r_min && r_exact < g.r_max) {
        int best = 1;
        double bg = 0.0;
        for (int i = 1; i < g.n_cells; ++i) {
            if (std::abs(g.center(i) - r_exact) > 50.0 * g.dr()) continue;
            const double grad = std::abs(g.rho[i] - g.rho[i - 1]);
            if (grad > bg) {
                bg = grad;
                best = i;
            }
        }
        e.shock_cells = std::abs(g.edge(best) - r_exact) / g.dr();
    }
    return e;
}

}  // namespace simflow
