#include "simflow/weak_verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "simflow/quadrature.hpp"

namespace simflow {

namespace {

// panels from a toward b with |endpoint| shrinking geometrically; a and b on
// the same side of 0, |b| < |a|
template <typename F>
double integrate_toward_zero(const F& f, double a, double b, double rtol) {
    double total = 0.0;
    double lo = a;
    while (std::abs(lo) > 16.0 * std::abs(b)) {
        const double hi = lo / 10.0;
        total += integrate_adaptive(f, lo, hi, rtol, 1e-300).value;
        lo = hi;
    }
    total += integrate_adaptive(f, lo, b, rtol, 1e-300).value;
    return total;
}

// panels upward from a (near 0) to b
template <typename F>
double integrate_from_zero(const F& f, double a, double b, double rtol) {
    double total = 0.0;
    double lo = a;
    while (16.0 * std::abs(lo) < std::abs(b)) {
        const double hi = lo * 10.0;
        total += integrate_adaptive(f, lo, hi, rtol, 1e-300).value;
        lo = hi;
    }
    total += integrate_adaptive(f, lo, b, rtol, 1e-300).value;
    return total;
}

struct XIntegrands {
    const FlowField& ff;

    double mass(double x) const {
        const auto pr = ff.ratios_at(x);
        return pr.R * std::pow(std::abs(x), -(alpha() + 1.0));
    }
    double imp(double x) const {
        const auto pr = ff.ratios_at(x);
        return pr.R * std::abs(pr.V_over_x) *
               std::pow(std::abs(x), -(alpha() + 1.0 / lambda()));
    }
    double ek(double x) const {
        const auto pr = ff.ratios_at(x);
        return pr.R * pr.V_over_x * pr.V_over_x *
               std::pow(std::abs(x), -(alpha() - 1.0 + 2.0 / lambda()));
    }
    double ep(double x) const {
        const auto pr = ff.ratios_at(x);
        return pr.R * pr.C_over_x * pr.C_over_x *
               std::pow(std::abs(x), -(alpha() - 1.0 + 2.0 / lambda()));
    }

    double lambda() const { return ff.solution().lam.lambda; }
    double alpha() const { return ff.solution().cfg.n / lambda(); }
};

// integral of g over [xbar, inf) for small xbar > 0, split at the reflected
// shock and with a power-tail closure
template <typename G>
double positive_x_integral(const FlowField& ff, const G& g, double xbar, double rtol) {
    const double B = ff.solution().fit.B;
    const double x_last = ff.solution().traj.pieces.back().x.back();
    double total = 0.0;
    if (xbar < B) {
        total += integrate_from_zero(g, xbar, B, rtol);
        total += integrate_from_zero(g, B, x_last, rtol);
    } else if (xbar < x_last) {
        total += integrate_from_zero(g, xbar, x_last, rtol);
    }
    const double lo = std::max(xbar, x_last);
    total += integrate_power_tail(g, lo, rtol).value;
    return total;
}

}  // namespace

Conserved local_conserved(const FlowField& ff, double t, double rbar) {
    const auto& sol = ff.solution();
    if (sol.cfg.s == 0) return local_conserved_r_route(ff, t, rbar);  // shock-case transform
    const double la = sol.lam.lambda;
    const double n = sol.cfg.n;
    const double alpha = n / la;
    const double rtol = 1e-10;
    XIntegrands xi{ff};

    Conserved out;
    if (t == 0.0) return conserved_at_collapse(ff, rbar);
    const double xbar = t / std::pow(rbar, la);
    if (t < 0.0) {
        const double at = std::pow(-t, alpha);
        if (xbar <= -1.0) {
            // shock still outside rbar: quiescent ball
            out.M = std::pow(rbar, n) / n;
            return out;
        }
        auto m = [&](double x) { return xi.mass(x); };
        auto i = [&](double x) { return xi.imp(x); };
        auto k = [&](double x) { return xi.ek(x); };
        auto p = [&](double x) { return xi.ep(x); };
        out.M = at / n + at / la * integrate_toward_zero(m, -1.0, xbar, rtol);
        out.I = std::pow(-t, alpha - 1.0 + 1.0 / la) / (la * la) *
                integrate_toward_zero(i, -1.0, xbar, rtol);
        out.EK = std::pow(-t, alpha - 2.0 + 2.0 / la) / (2.0 * la * la * la) *
                 integrate_toward_zero(k, -1.0, xbar, rtol);
        out.EP = std::pow(-t, alpha - 2.0 + 2.0 / la) /
                 (la * la * la * sol.cfg.gamma * (sol.cfg.gamma - 1.0)) *
                 integrate_toward_zero(p, -1.0, xbar, rtol);
        return out;
    }
    auto m = [&](double x) { return xi.mass(x); };
    auto i = [&](double x) { return xi.imp(x); };
    auto k = [&](double x) { return xi.ek(x); };
    auto p = [&](double x) { return xi.ep(x); };
    out.M = std::pow(t, alpha) / la * positive_x_integral(ff, m, xbar, rtol);
    out.I = std::pow(t, alpha - 1.0 + 1.0 / la) / (la * la) *
            positive_x_integral(ff, i, xbar, rtol);
    out.EK = std::pow(t, alpha - 2.0 + 2.0 / la) / (2.0 * la * la * la) *
             positive_x_integral(ff, k, xbar, rtol);
    out.EP = std::pow(t, alpha - 2.0 + 2.0 / la) /
             (la * la * la * sol.cfg.gamma * (sol.cfg.gamma - 1.0)) *
             positive_x_integral(ff, p, xbar, rtol);
    return out;
}

Conserved local_conserved_r_route(const FlowField& ff, double t, double rbar) {
    const auto& sol = ff.solution();
    const int m = sol.cfg.m();
    auto rho = [&](double r) { return ff.sample(t, r).rho * std::pow(r, m); };
    auto imp = [&](double r) {
        const auto s = ff.sample(t, r);
        return s.rho * std::abs(s.u) * std::pow(r, m);
    };
    auto ek = [&](double r) {
        const auto s = ff.sample(t, r);
        return 0.5 * s.rho * s.u * s.u * std::pow(r, m);
    };
    auto ep = [&](double r) {
        const auto s = ff.sample(t, r);
        return s.rho * s.e * std::pow(r, m);
    };
    // split at the shock radius inside (0, rbar) when present
    std::vector<double> cuts{rbar * 1e-9, rbar};
    if (t < 0.0) {
        const double ri = ff.incoming_shock_radius(t);
        if (ri < rbar) cuts.insert(cuts.begin() + 1, ri);
    } else if (t > 0.0) {
        const double ro = ff.outgoing_shock_radius(t);
        if (ro < rbar) cuts.insert(cuts.begin() + 1, ro);
    }
    const double rtol = 1e-10;
    Conserved out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        out.M += integrate_from_zero(rho, cuts[i], cuts[i + 1], rtol);
        out.I += integrate_from_zero(imp, cuts[i], cuts[i + 1], rtol);
        out.EK += integrate_from_zero(ek, cuts[i], cuts[i + 1], rtol);
        out.EP += integrate_from_zero(ep, cuts[i], cuts[i + 1], rtol);
    }
    return out;
}

Conserved conserved_at_collapse(const FlowField& ff, double rbar) {
    const auto& sol = ff.solution();
    const double la = sol.lam.lambda, n = sol.cfg.n, g = sol.cfg.gamma;
    Conserved out;
    out.M = std::pow(rbar, n) * sol.R0 / n;
    out.I = sol.R0 * sol.ell * std::pow(rbar, n + 1.0 - la) / (la * (n + 1.0 - la));
    out.EK = sol.R0 * sol.ell * sol.ell * std::pow(rbar, n + 2.0 - 2.0 * la) /
             (2.0 * la * la * (n + 2.0 - 2.0 * la));
    out.EP = sol.R0 * sol.L * sol.L * std::pow(rbar, n + 2.0 - 2.0 * la) /
             (la * la * g * (g - 1.0) * (n + 2.0 - 2.0 * la));
    return out;
}

PReport check_P_conditions(const FlowField& ff) {
    const auto& sol = ff.solution();
    PReport rep;
    rep.ell = sol.ell;
    rep.L = sol.L;
    double lo = 1e300, hi = -1e300;
    for (const auto& p : sol.traj.pieces)
        for (double v : p.V) {
            lo = std::min(lo, 1.0 + v);
            hi = std::max(hi, 1.0 + v);
        }
    // series tail beyond the last node
    const double x_last = sol.traj.pieces.back().x.back();
    for (double x = x_last; x < 1e12; x *= 10.0) {
        const auto pr = ff.ratios_at(x * 1.0000001);
        lo = std::min(lo, 1.0 + pr.V);
        hi = std::max(hi, 1.0 + pr.V);
    }
    lo = std::min(lo, 1.0 + sol.lam.V0);
    rep.one_plus_V_min = lo;
    rep.one_plus_V_max = hi;
    rep.P1 = lo > 0.0 && std::isfinite(hi);
    rep.P2 = sol.ell > 0.0 && sol.L < 0.0 && std::isfinite(sol.ell) && std::isfinite(sol.L);
    rep.x_far = std::max(1e4, x_last);
    rep.V_far_gap = std::abs(ff.ratios_at(rep.x_far).V - sol.lam.V0);
    rep.P3 = rep.V_far_gap < 1e-3;
    return rep;
}

ContinuityReport continuity_scan(const FlowField& ff, double rbar,
                                 const std::vector<double>& t_grid) {
    ContinuityReport rep;
    rep.at_collapse = conserved_at_collapse(ff, rbar);
    const double ref[4] = {rep.at_collapse.M, rep.at_collapse.I, rep.at_collapse.EK,
                           rep.at_collapse.EP};
    double best_t_neg = -1e300, best_t_pos = 1e300;
    for (double t : t_grid) {
        ContinuityRow row;
        row.t = t;
        row.vals = local_conserved(ff, t, rbar);
        const double v[4] = {row.vals.M, row.vals.I, row.vals.EK, row.vals.EP};
        for (int i = 0; i < 4; ++i) row.rel_gap[i] = std::abs(v[i] - ref[i]) / std::abs(ref[i]);
        rep.rows.push_back(row);
        if (t < 0.0) best_t_neg = std::max(best_t_neg, t);
        if (t > 0.0) best_t_pos = std::min(best_t_pos, t);
    }
    for (const auto& row : rep.rows)
        if (row.t == best_t_neg || row.t == best_t_pos)
            for (int i = 0; i < 4; ++i)
                rep.limit_gap[i] = std::max(rep.limit_gap[i], row.rel_gap[i]);
    return rep;
}

IntegrabilityReport integrability(const FlowField& ff, double rbar) {
    const auto& sol = ff.solution();
    const double la = sol.lam.lambda, n = sol.cfg.n, g = sol.cfg.gamma;
    if (!(la < 1.0 + n / 2.0))
        throw validation_error("integrability requires lambda < 1 + n/2; lambda = " +
                               std::to_string(la));
    const double alpha = n / la;
    IntegrabilityReport rep;
    rep.tail_condition = true;
    for (double beta : {2.0, 3.0})
        rep.tail_condition &= alpha + beta * (1.0 / la - 1.0) > -1.0;
    for (double beta : {0.0, 1.0})
        rep.tail_condition &= alpha + (2.0 + beta) * (1.0 / la - 1.0) > -1.0;
    if (!rep.tail_condition)
        throw validation_error("divergent dt-tail for lambda = " + std::to_string(la));

    const double B = sol.fit.B;
    const double rtol = 1e-9;

    auto compute_I = [&](double beta) {
        auto body = [&](double x) {
            const auto pr = ff.ratios_at(x);
            return pr.R * std::pow(std::abs(pr.V), beta) / std::pow(std::abs(x), beta);
        };
        auto tail = [&](double x) {
            const auto pr = ff.ratios_at(x);
            return pr.R * std::pow(std::abs(pr.V), beta) *
                   std::pow(x, -(alpha + 1.0 + beta / la));
        };
        const double pow_ = alpha + 1.0 + beta * (1.0 / la - 1.0);
        double v = integrate_adaptive(body, -1.0, 0.0, rtol, 1e-300).value +
                   integrate_adaptive(body, 0.0, B, rtol, 1e-300).value;
        const double x_last = sol.traj.pieces.back().x.back();
        double tl = integrate_from_zero(tail, B, x_last, rtol) +
                    integrate_power_tail(tail, x_last, rtol).value;
        return (v + std::pow(B, pow_) * tl) * std::pow(rbar, la * (alpha + 1.0) + beta * (1.0 - la)) /
               (std::pow(la, beta + 1.0) * pow_);
    };
    auto compute_P = [&](double beta) {
        auto body = [&](double x) {
            const auto pr = ff.ratios_at(x);
            return pr.R * pr.C_over_x * pr.C_over_x * std::pow(std::abs(pr.V_over_x), beta);
        };
        auto tail = [&](double x) {
            const auto pr = ff.ratios_at(x);
            return pr.R * pr.C_over_x * pr.C_over_x * std::pow(std::abs(pr.V_over_x), beta) *
                   std::pow(x, -(alpha + 1.0 + (2.0 + beta) * (1.0 / la - 1.0)));
        };
        const double pow_ = alpha + 1.0 + (2.0 + beta) * (1.0 / la - 1.0);
        double v = integrate_adaptive(body, -1.0, 0.0, rtol, 1e-300).value +
                   integrate_adaptive(body, 0.0, B, rtol, 1e-300).value;
        const double x_last = sol.traj.pieces.back().x.back();
        double tl = integrate_from_zero(tail, B, x_last, rtol) +
                    integrate_power_tail(tail, x_last, rtol).value;
        return (v + std::pow(B, pow_) * tl) *
               std::pow(rbar, la * (alpha + 1.0) + (2.0 + beta) * (1.0 - la)) /
               (g * std::pow(la, beta + 3.0) * pow_);
    };

    rep.I2 = compute_I(2.0);
    rep.I3 = compute_I(3.0);
    rep.P0 = compute_P(0.0);
    rep.P1 = compute_P(1.0);
    rep.finite = std::isfinite(rep.I2) && std::isfinite(rep.I3) && std::isfinite(rep.P0) &&
                 std::isfinite(rep.P1);
    return rep;
}

double BumpTestFunction::operator()(double t, double r) const {
    auto bump = [](double z) {
        const double z2 = z * z;
        if (z2 >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - z2));
    };
    const double wt = bump((t - t0) / ht);
    const double wr = bump(r / hr);
    return vanish_at_axis ? wt * r * wr : wt * wr;
}

FluxSweepResult flux_residual_sweep(const FlowField& ff, ConservationLaw law,
                                    const BumpTestFunction& psi,
                                    const std::vector<double>& deltas) {
    const auto& sol = ff.solution();
    const double la = sol.lam.lambda, n = sol.cfg.n, g = sol.cfg.gamma;
    if (law == ConservationLaw::momentum && !psi.vanish_at_axis)
        throw validation_error("momentum test functions must vanish on the axis");

    FluxSweepResult out;
    out.law = law;
    out.deltas = deltas;
    const double rtol = 1e-9;

    for (double d : deltas) {
        const double dl = std::pow(d, la);
        const double xT = psi.t_end() / dl;
        auto weight = [&](double x) { return psi(x * dl, d); };
        double integral = 0.0;
        auto make_integrand = [&](auto base) {
            return [base, weight](double x) { return base(x) * weight(x); };
        };
        auto base = [&](double x) -> double {
            const auto pr = ff.ratios_at(x);
            switch (law) {
                case ConservationLaw::mass:
                    return pr.R * pr.V_over_x;
                case ConservationLaw::momentum:
                    return pr.R * (pr.V_over_x * pr.V_over_x +
                                   pr.C_over_x * pr.C_over_x / g);
                case ConservationLaw::energy:
                    return pr.R * pr.V_over_x *
                           (0.5 * pr.V_over_x * pr.V_over_x +
                            pr.C_over_x * pr.C_over_x / (g - 1.0));
            }
            return 0.0;
        };
        auto f = make_integrand(base);
        integral += integrate_adaptive(f, -1.0, 0.0, rtol, 1e-300).value;
        const double B = sol.fit.B;
        if (xT > B) {
            integral += integrate_adaptive(f, 0.0, B, rtol, 1e-300).value;
            integral += integrate_from_zero(f, B, xT, rtol);
        } else {
            integral += integrate_adaptive(f, 0.0, xT, rtol, 1e-300).value;
        }
        double pre = 0.0;
        switch (law) {
            case ConservationLaw::mass: pre = std::pow(d, n) / la; break;
            case ConservationLaw::momentum: pre = std::pow(d, n + 1.0 - la) / (la * la); break;
            case ConservationLaw::energy:
                pre = std::pow(d, n + 2.0 - 2.0 * la) / (la * la * la);
                break;
        }
        out.residuals.push_back(std::abs(pre * integral));
    }

    switch (law) {
        case ConservationLaw::mass: out.predicted_exponent = n - la; break;
        case ConservationLaw::momentum:
        case ConservationLaw::energy: out.predicted_exponent = n + 2.0 - 2.0 * la; break;
    }

    // least-squares slope on the last three points of the sweep
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < deltas.size(); ++i)
        if (out.residuals[i] > 0.0) pts.push_back({std::log(deltas[i]), std::log(out.residuals[i])});
    std::sort(pts.begin(), pts.end());
    if (pts.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < 3; ++i) {
            sx += pts[i].first;
            sy += pts[i].second;
            sxx += pts[i].first * pts[i].first;
            sxy += pts[i].first * pts[i].second;
        }
        out.fitted_exponent = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    }
    out.monotone_decay = true;
    // residuals listed with deltas; check decay as delta decreases
    std::vector<std::pair<double, double>> dr;
    for (size_t i = 0; i < deltas.size(); ++i) dr.push_back({deltas[i], out.residuals[i]});
    std::sort(dr.begin(), dr.end());
    for (size_t i = 1; i < dr.size(); ++i)
        if (dr[i].second <= dr[i - 1].second) out.monotone_decay = false;
    return out;
}

VerifyReport verify(const FlowField& ff, const VerifyOptions& opt) {
    const auto& sol = ff.solution();
    VerifyReport rep;
    rep.rbar = opt.rbar;
    rep.informational = sol.cfg.s == 0;
    rep.lambda_ok = sol.lam.lambda > 1.0 && sol.lam.lambda < 1.0 + sol.cfg.n / 2.0;
    rep.p = check_P_conditions(ff);

    std::vector<double> tg;
    for (int k = 2; k <= opt.t_decades + 1; ++k) {
        tg.push_back(-std::pow(10.0, -k));
        tg.push_back(std::pow(10.0, -k));
    }
    std::sort(tg.begin(), tg.end());
    rep.continuity = continuity_scan(ff, opt.rbar, tg);
    rep.integ = integrability(ff, opt.rbar);

    if (sol.cfg.s == 1) {
        const std::vector<BumpTestFunction> fams_ce = {
            {0.0, 1.2, 1.5, false}, {-0.25, 0.9, 2.0, false}, {0.3, 1.0, 1.0, false}};
        const std::vector<BumpTestFunction> fams_m = {
            {0.0, 1.2, 1.5, true}, {-0.25, 0.9, 2.0, true}, {0.3, 1.0, 1.0, true}};
        for (const auto& f : fams_ce) {
            rep.flux.push_back(flux_residual_sweep(ff, ConservationLaw::mass, f, opt.deltas));
            rep.flux.push_back(flux_residual_sweep(ff, ConservationLaw::energy, f, opt.deltas));
        }
        for (const auto& f : fams_m)
            rep.flux.push_back(flux_residual_sweep(ff, ConservationLaw::momentum, f, opt.deltas));
    }

    std::mt19937 rng(opt.rng_seed);
    std::uniform_real_distribution<double> ut(-1.0, 1.0), ur(0.4, 1.8);
    for (int i = 0; i < opt.two_route_samples; ++i) {
        TwoRouteRow row;
        row.t = ut(rng);
        if (std::abs(row.t) < 1e-3) row.t = std::copysign(1e-3, row.t);
        row.rbar = ur(rng);
        row.x_route = local_conserved(ff, row.t, row.rbar);
        row.r_route = local_conserved_r_route(ff, row.t, row.rbar);
        const double a[4] = {row.x_route.M, row.x_route.I, row.x_route.EK, row.x_route.EP};
        const double b[4] = {row.r_route.M, row.r_route.I, row.r_route.EK, row.r_route.EP};
        for (int j = 0; j < 4; ++j)
            row.worst_rel = std::max(row.worst_rel, std::abs(a[j] - b[j]) / std::abs(b[j]));
        rep.two_route.push_back(row);
    }
    return rep;
}

}  // namespace simflow
