#include "simflow/eigenvalue.hpp"

#include <cmath>
#include <sstream>

#include "simflow/ode.hpp"

namespace simflow {

using Vec3 = Eigen::Vector3d;

double cavity_exit_slope(const GasConfig& cfg, double lambda) {
    const double g = cfg.gamma;
    const double denom = cfg.n * (g - 1.0) - 2.0 * (lambda - 1.0);
    if (denom <= 0.0)
        throw validation_error(
            "cavity exit direction invalid: lambda >= 1 + n(gamma-1)/2 leaves the saddle "
            "with no branch into C > 1+V");
    return g * (g - 1.0) * (lambda - 1.0) / denom;
}

SimilarityState launch_state(const GasConfig& cfg, const LambdaBinding& lam,
                             const SimOdeControls& ctl) {
    cfg.validate();
    if (cfg.s == 1) {
        SimilarityState quiescent{-1.0, 0.0, 0.0, 1.0};
        SimilarityState st = rh_jump(cfg, quiescent, CBranch::positive);
        st.x = -1.0;
        return st;
    }
    // cavity: step off the saddle at (V,C) = (-1, 0) along dZ/dV
    const double om = cavity_exit_slope(cfg, lam.lambda);
    const double v = ctl.eps_s;  // 1+V offset
    const double V = -1.0 + v;
    const double C = std::sqrt(om * v);
    // local linearization: v = mu * xi with mu = [om(e0 - n) + (lambda-1)] / (lambda om)
    const double e0 = 2.0 * (lam.lambda - 1.0) / (cfg.gamma - 1.0);
    const double mu = (om * (e0 - cfg.n) + (lam.lambda - 1.0)) / (lam.lambda * om);
    const double xi0 = v / mu;  // mu < 0 on the admissible branch, so xi0 < 0
    const double x0 = -std::exp(xi0);
    // isentropic density, entropy constant A = 1
    const double R = std::pow(C * C / (cfg.gamma * lam.lambda * lam.lambda * x0 * x0),
                              1.0 / (cfg.gamma - 1.0));
    return {x0, V, C, R};
}

namespace {

struct ArcRun {
    ShootOutcome outcome;
    Vec3 y;  // V, C, xi
};

ArcRun shoot_curve(const GasConfig& cfg, const LambdaBinding& lam, const SimOdeControls& ctl) {
    const SimilarityState st = launch_state(cfg, lam, ctl);
    const auto f0 = eval_dgf(cfg, lam, st.V, st.C);
    // orientation: V increases initially for both launches
    const double o = f0.G > 0.0 ? 1.0 : -1.0;

    auto rhs = [&](double, const Vec3& y) {
        const auto f = eval_dgf(cfg, lam, y[0], y[1]);
        const double N = std::hypot(f.F, f.G);
        if (N < 1e-300) return Vec3(0.0, 0.0, 0.0);
        return Vec3(o * f.G / N, o * f.F / N, -o * lam.lambda * f.D / N);
    };

    std::vector<OdeEvent<3>> ev(3);
    ev[0].value = [](double, const Vec3& y) { return y[1] - (1.0 + y[0]); };
    ev[0].direction = -1;
    ev[1].value = [&](double, const Vec3& y) {
        const auto f = eval_dgf(cfg, lam, y[0], y[1]);
        return std::log(std::hypot(f.F, f.G) + 1e-300) + 21.0;  // N below ~7.6e-10
    };
    ev[1].direction = -1;
    ev[2].value = [&](double, const Vec3& y) {
        return 8.0 - std::max(std::abs(y[1]), std::abs(y[0]));
    };
    ev[2].direction = -1;

    OdeControls octl;
    octl.rtol = ctl.rtol;
    octl.atol = ctl.atol;
    octl.max_step = 0.05;

    const double xi_start = std::log(std::abs(st.x));
    auto term = integrate_ode<3>(rhs, 0.0, Vec3(st.V, st.C, xi_start), 120.0, octl, ev);

    ArcRun out;
    out.y = term.y;
    switch (term.status) {
        case OdeStatus::event:
            if (term.event_index == 0)
                out.outcome = ShootOutcome::crossed;
            else if (term.event_index == 1)
                out.outcome = ShootOutcome::stalled_interior;  // refined below
            else
                out.outcome = ShootOutcome::guard;
            break;
        case OdeStatus::reached_end:
            out.outcome = ShootOutcome::exhausted;
            break;
        case OdeStatus::step_failure:
            out.outcome = ShootOutcome::stalled_interior;
            break;
    }
    return out;
}

}  // namespace

ShootDetail shoot_detail(const GasConfig& cfg, const LambdaBinding& lam,
                         const SimOdeControls& ctl) {
    if (cfg.n == 1) cfg.validate();  // slab diagnostic
    ArcRun run = shoot_curve(cfg, lam, ctl);
    const SonicPoints sp = sonic_points(cfg, lam);

    ShootDetail d;
    d.V_hit = run.y[0];
    d.C_hit = run.y[1];
    d.x_hit = -std::exp(run.y[2]);
    d.outcome = run.outcome;

    const double line_gap = run.y[1] - (1.0 + run.y[0]);
    // a stall essentially on the line is a funneled hit at a common zero
    if (run.outcome == ShootOutcome::stalled_interior && std::abs(line_gap) < 1e-5)
        d.outcome = ShootOutcome::crossed;

    if (d.outcome == ShootOutcome::crossed) {
        if (!sp.real) {
            d.residual = d.V_hit - sp.v_merged;
            d.zero_index = -1;
        } else if (std::abs(d.V_hit - sp.v_lo) < std::abs(d.V_hit - sp.v_hi)) {
            d.residual = d.V_hit - sp.v_lo;
            d.zero_index = 0;
        } else {
            d.residual = d.V_hit - sp.v_hi;
            d.zero_index = 1;
        }
    } else {
        d.residual = (line_gap > 0.0) ? 10.0 : -10.0;
    }
    return d;
}

double shoot_residual(const GasConfig& cfg, double lambda, const SimOdeControls& ctl) {
    return shoot_detail(cfg, bind_lambda(cfg, lambda), ctl).residual;
}

std::pair<double, double> default_bracket(const GasConfig& cfg) {
    if (cfg.s == 1) return {1.01, 1.0 + cfg.n / 2.0 - 1e-6};
    return {1.01, 1.0 + cfg.n * (cfg.gamma - 1.0) / 2.0 - 1e-6};
}

ShootResult solve_lambda(const GasConfig& cfg, std::pair<double, double> bracket, double tol,
                         const SimOdeControls& ctl) {
    cfg.validate();
    auto detail_at = [&](double la) { return shoot_detail(cfg, bind_lambda(cfg, la), ctl); };

    ShootResult res;
    const ShootDetail dlo = detail_at(bracket.first);
    if (dlo.outcome != ShootOutcome::crossed) {
        std::ostringstream os;
        os << "no sonic-line crossing at the lower bracket end lambda = " << bracket.first
           << " (gamma = " << cfg.gamma << ", n = " << cfg.n << ", kind = "
           << (cfg.s == 1 ? "shock" : "cavity") << ")";
        throw no_root_error(os.str());
    }
    const double cross_side = dlo.residual >= 0.0 ? 1.0 : -1.0;

    // sentinel outcomes count as "past the eigenvalue": sign opposite to the
    // crossing-side residual so the bracket closes on the boundary
    auto signed_res = [&](const ShootDetail& d) {
        return d.outcome == ShootOutcome::crossed ? d.residual : -cross_side * 10.0;
    };

    const ShootDetail dhi = detail_at(bracket.second);
    double fa = signed_res(dlo), fb = signed_res(dhi);
    res.bracket_history.push_back({bracket.first, fa});
    res.bracket_history.push_back({bracket.second, fb});
    if (fa * fb > 0.0) {
        std::ostringstream os;
        os << "no sign change of the shooting residual on [" << bracket.first << ", "
           << bracket.second << "]: residuals " << fa << ", " << fb << " (gamma = " << cfg.gamma
           << ", n = " << cfg.n << ", kind = " << (cfg.s == 1 ? "shock" : "cavity") << ")";
        throw no_root_error(os.str());
    }

    double a = bracket.first, b = bracket.second;
    // keep the two best smooth-side samples for the secant polish
    double s1 = bracket.first, f1 = fa;
    double s2 = 0.0, f2 = 0.0;
    bool have2 = false;
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const ShootDetail dm = detail_at(m);
        const double fm = signed_res(dm);
        res.bracket_history.push_back({m, fm});
        if (dm.outcome == ShootOutcome::crossed && std::abs(fm) < 1.0) {
            s2 = s1;
            f2 = f1;
            have2 = std::abs(f1) < 1.0;
            s1 = m;
            f1 = fm;
        }
        if (fa * fm <= 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    double root = 0.5 * (a + b);
    if (have2 && f1 != f2) {
        const double sec = s1 - f1 * (s1 - s2) / (f1 - f2);
        if (sec > a - tol && sec < b + tol) root = std::min(std::max(sec, a), b);
    }

    res.lambda_std = root;
    const ShootDetail df = detail_at(root);
    res.crossing_V = df.V_hit;
    res.crossing_C = df.C_hit;
    res.x_c = df.x_hit;
    res.zero_index = df.zero_index;
    res.converged = true;
    return res;
}

}  // namespace simflow
