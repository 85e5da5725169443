#include <doctest.h>

#include <cmath>

#include "simflow/eigenvalue.hpp"
#include "simflow/ode.hpp"
#include "simflow/sim_ode.hpp"

using namespace simflow;

namespace {

const double kLambdaStd33 = 1.5713126233;

GasConfig cfg33() {
    GasConfig cfg;
    cfg.gamma = 3.0;
    cfg.n = 3;
    cfg.s = 1;
    return cfg;
}

}  // namespace

TEST_CASE("rhs at the post-shock state: finite, V grows toward the sonic line") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    const auto [dV, dC] = rhs(cfg, lam, -1.0, -0.5, 0.8660254037844386);
    CHECK(std::isfinite(dV));
    CHECK(std::isfinite(dC));
    CHECK(dV > 0.0);  // |V| shrinks toward 0 as x -> 0^-
    CHECK(dC < 0.0);
}

TEST_CASE("rhs signals the singular sets") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, 1.4);
    CHECK_THROWS_AS(rhs(cfg, lam, -0.5, 0.2, 1.2), singular_evaluation_error);  // D = 0
    CHECK_THROWS_AS(rhs(cfg, lam, 0.0, 0.2, 0.1), singular_evaluation_error);   // x = 0
    // 1/(lambda x) prefactor: derivatives decay like 1/x
    const auto [dV1, dC1] = rhs(cfg, lam, 1e3, 0.2, -0.6);
    const auto [dV2, dC2] = rhs(cfg, lam, 1e6, 0.2, -0.6);
    CHECK(std::abs(dV2) < 2e-3 * std::abs(dV1));
    CHECK(std::abs(dC2) < 2e-3 * std::abs(dC1));
}

TEST_CASE("sonic points at lambda_std(3,3,1)") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    const auto sp = sonic_points(cfg, lam);
    REQUIRE(sp.real);
    CHECK(sp.v_hi == doctest::Approx(-0.3331441171).epsilon(1e-8));
    // both roots are common zeros of F and G on the line
    for (double v : {sp.v_lo, sp.v_hi}) {
        const auto f = eval_dgf(cfg, lam, v, 1.0 + v);
        CHECK(std::abs(f.G) < 1e-12);
        CHECK(std::abs(f.F) < 1e-12);
    }
}

TEST_CASE("pre-collapse piece terminates with a sonic crossing inside (-1, 0)") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    SimOdeControls ctl;
    const SimilarityState start = launch_state(cfg, lam, ctl);
    const auto pr = integrate_piece(cfg, lam, start, 0.0, ctl);
    CHECK(pr.termination == EventKind::critical_crossing);
    CHECK(pr.end.x > -1.0);
    CHECK(pr.end.x < 0.0);
    CHECK(pr.end.x == doctest::Approx(-0.75043223).epsilon(1e-5));
    // piece grid is strictly increasing in x
    for (size_t i = 1; i < pr.piece.size(); ++i) CHECK(pr.piece.x[i] > pr.piece.x[i - 1]);
}

TEST_CASE("far-off lambda terminates on the line as a non-removable singularity") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, 1.40);
    SimOdeControls ctl;
    const auto pr = integrate_piece(cfg, lam, launch_state(cfg, lam, ctl), 0.0, ctl);
    CHECK(pr.termination == EventKind::sonic_fold);
}

TEST_CASE("crossing slope equals a root of the local quadratic (brute-force oracle)") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    SimOdeControls ctl;
    const auto pr = integrate_piece(cfg, lam, launch_state(cfg, lam, ctl), 0.0, ctl);
    const auto ci = cross_critical(cfg, lam, pr, ctl);

    // oracle: finite-difference partials + sign-change scan for the roots of
    // q(tau) = G_C tau^2 + (G_V - F_C) tau - F_V, independent of the
    // closed-form slope computation
    const double h = 1e-7;
    auto G = [&](double V, double C) { return eval_dgf(cfg, lam, V, C).G; };
    auto F = [&](double V, double C) { return eval_dgf(cfg, lam, V, C).F; };
    const double GV = (G(ci.Vz + h, ci.Cz) - G(ci.Vz - h, ci.Cz)) / (2 * h);
    const double GC = (G(ci.Vz, ci.Cz + h) - G(ci.Vz, ci.Cz - h)) / (2 * h);
    const double FV = (F(ci.Vz + h, ci.Cz) - F(ci.Vz - h, ci.Cz)) / (2 * h);
    const double FC = (F(ci.Vz, ci.Cz + h) - F(ci.Vz, ci.Cz - h)) / (2 * h);
    auto q = [&](double tau) { return GC * tau * tau + (GV - FC) * tau - FV; };
    std::vector<double> roots;
    double prev = q(-10.0);
    for (int i = 1; i <= 40000; ++i) {
        const double tau = -10.0 + 20.0 * i / 40000.0;
        const double cur = q(tau);
        if ((prev > 0) != (cur > 0)) {
            double a = tau - 20.0 / 40000.0, b = tau;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                ((q(a) > 0) != (q(m) > 0) ? b : a) = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    REQUIRE(roots.size() == 2);
    const double gap =
        std::min(std::abs(ci.slope - roots[0]), std::abs(ci.slope - roots[1]));
    CHECK(gap < 1e-5);
    // the incoming trajectory slope selects that root
    CHECK(std::abs(ci.incoming_slope - ci.slope) < 1e-2);
}

TEST_CASE("crossing at a point with G != 0 is rejected") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    SimOdeControls ctl;
    PieceResult fake;
    fake.termination = EventKind::critical_crossing;
    fake.end = {-0.5, -0.1, 0.9, 0.0};  // on C = 1+V but far from the common zeros
    fake.piece.x = {-0.6, -0.5};
    fake.piece.V = {-0.12, -0.1};
    fake.piece.C = {0.95, 0.9};
    CHECK_THROWS_AS(cross_critical(cfg, lam, fake, ctl), integration_error);
}

TEST_CASE("origin crossing: ell > 0 > L and continuity of V/x, C/x") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    SimOdeControls ctl;
    const auto p1 = integrate_piece(cfg, lam, launch_state(cfg, lam, ctl), 0.0, ctl);
    const auto ci = cross_critical(cfg, lam, p1, ctl);
    const auto p2 = integrate_piece(cfg, lam, ci.relaunched, 0.0, ctl);
    REQUIRE(p2.termination == EventKind::origin);
    const auto oi = cross_origin(cfg, lam, p2.piece, ctl);
    CHECK(oi.ell > 0.0);
    CHECK(oi.L < 0.0);
    CHECK(oi.ell == doctest::Approx(0.26879).epsilon(2e-4));
    CHECK(oi.L == doctest::Approx(-0.97809).epsilon(2e-4));
    // V(x)/x continuous through 0: the relaunched state matches the limits
    CHECK(oi.relaunched.V / oi.relaunched.x == doctest::Approx(oi.ell));
    CHECK(oi.relaunched.C / oi.relaunched.x == doctest::Approx(oi.L));
    // V/x at the last approach nodes is already near ell
    const auto& p = p2.piece;
    CHECK(p.V.back() / p.x.back() == doctest::Approx(oi.ell).epsilon(1e-6));
}

TEST_CASE("entropy integral is conserved by the independent density ODE") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    using Vec3 = Eigen::Vector3d;

    auto drift = [&](double rtol) {
        OdeControls octl;
        octl.rtol = rtol;
        octl.atol = rtol * 1e-2;
        octl.max_step = 0.05;
        const auto st = launch_state(cfg, bind_lambda(cfg, kLambdaStd33), {});
        auto rhs3 = [&](double, const Vec3& y) {
            const auto f = eval_dgf(cfg, lam, y[0], y[1]);
            const double pre = -1.0 / (lam.lambda * f.D);
            return Vec3(pre * f.G, pre * f.F, dlnR_dxi(cfg, lam, y[0], y[1]));
        };
        double worst = 0.0;
        const double K0 = entropy_integral(cfg, lam, st.C / st.x, st.V, st.R);
        // stop before the sonic point; the piece is smooth there
        std::vector<OdeEvent<3>> ev(1);
        ev[0].value = [&](double, const Vec3& y) {
            return eval_dgf(cfg, lam, y[0], y[1]).D + 0.02;
        };
        ev[0].direction = +1;
        integrate_ode<3>(rhs3, 0.0, Vec3(st.V, st.C, std::log(st.R)), std::log(1e-6), octl, ev,
                         [&](double xi, const Vec3& y, const DenseStep<3>&) {
                             const double x = -std::exp(xi);
                             const double K =
                                 entropy_integral(cfg, lam, y[1] / x, y[0], std::exp(y[2]));
                             worst = std::max(worst, std::abs(K - K0) / K0);
                         });
        return worst;
    };
    const double d10 = drift(1e-10);
    CHECK(d10 < 1e-8);
    CHECK(drift(5e-11) <= d10 * 1.5);  // tightening tolerances does not worsen the drift
}

TEST_CASE("single-ODE curve and x-parametrized system trace the same curve") {
    const auto cfg = cfg33();
    const auto lam = bind_lambda(cfg, kLambdaStd33);
    SimOdeControls ctl;
    const auto p1 = integrate_piece(cfg, lam, launch_state(cfg, lam, ctl), 0.0, ctl);

    // arc-length form of dC/dV = F/G (independent of the x-parametrization)
    using Vec2 = Eigen::Vector2d;
    std::vector<Vec2> curve;
    OdeControls octl;
    octl.rtol = 1e-12;
    octl.atol = 1e-14;
    octl.max_step = 1e-3;
    const auto st = launch_state(cfg, lam, ctl);
    const double o = eval_dgf(cfg, lam, st.V, st.C).G > 0 ? 1.0 : -1.0;
    curve.push_back(Vec2(st.V, st.C));
    std::vector<OdeEvent<2>> ev(1);
    ev[0].value = [&](double, const Vec2& y) {
        const auto f = eval_dgf(cfg, lam, y[0], y[1]);
        return std::log(std::hypot(f.F, f.G) + 1e-300) + 21.0;
    };
    ev[0].direction = -1;
    integrate_ode<2>(
        [&](double, const Vec2& y) {
            const auto f = eval_dgf(cfg, lam, y[0], y[1]);
            const double N = std::hypot(f.F, f.G);
            return Vec2(o * f.G / N, o * f.F / N);
        },
        0.0, Vec2(st.V, st.C), 10.0, octl, ev,
        [&](double, const Vec2& y, const DenseStep<2>&) { curve.push_back(y); });

    // one-sided Hausdorff distance of the x-system nodes to the curve polyline
    double worst = 0.0;
    for (size_t i = 0; i < p1.piece.size(); ++i) {
        const Vec2 p(p1.piece.V[i], p1.piece.C[i]);
        double best = 1e300;
        for (size_t j = 0; j + 1 < curve.size(); ++j) {
            const Vec2 a = curve[j], b = curve[j + 1];
            const Vec2 ab = b - a;
            const double tt = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
            best = std::min(best, (a + tt * ab - p).squaredNorm());
        }
        worst = std::max(worst, std::sqrt(best));
    }
    CHECK(worst < 1e-8);
}
