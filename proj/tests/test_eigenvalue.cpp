#include <doctest.h>

#include <cmath>
#include <string>

#include "simflow/eigenvalue.hpp"

using namespace simflow;

namespace {
GasConfig make_cfg(double gamma, int n, int s) {
    GasConfig cfg;
    cfg.gamma = gamma;
    cfg.n = n;
    cfg.s = s;
    return cfg;
}
}  // namespace

TEST_CASE("shock launch state, gamma = 3") {
    const auto cfg = make_cfg(3.0, 3, 1);
    const auto st = launch_state(cfg, bind_lambda(cfg, 1.5), {});
    CHECK(st.x == -1.0);
    CHECK(st.V == doctest::Approx(-0.5));
    CHECK(st.C == doctest::Approx(0.8660254037844386));
    CHECK(st.R == doctest::Approx(2.0));
}

TEST_CASE("cavity launch leaves the interface at V(-1) = -1, C = R = 0") {
    const auto cfg = make_cfg(3.0, 3, 0);
    SimOdeControls ctl;
    ctl.eps_s = 1e-10;
    const auto st = launch_state(cfg, bind_lambda(cfg, 2.0), ctl);
    CHECK(st.V + 1.0 == doctest::Approx(1e-10));
    CHECK(st.C == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(std::abs(st.C) < 2e-5);
    CHECK(st.R < 1e-4);
    CHECK(st.R > 0.0);
    CHECK(st.x < -0.99);
    CHECK(st.x > -1.0 - 1e-12);
}

TEST_CASE("cavity saddle-exit slope, gamma = 3, n = 3, lambda = 2") {
    const auto cfg = make_cfg(3.0, 3, 0);
    CHECK(cavity_exit_slope(cfg, 2.0) == doctest::Approx(1.5).epsilon(1e-14));
    // invalid beyond lambda = 1 + n(gamma-1)/2
    CHECK_THROWS_AS(cavity_exit_slope(cfg, 4.1), validation_error);
}

TEST_CASE("residual at the published lambda_std(3,3,1) is tiny") {
    const auto cfg = make_cfg(3.0, 3, 1);
    CHECK(std::abs(shoot_residual(cfg, 1.5713126233, {})) < 1e-6);
}

TEST_CASE("residuals bracket the eigenvalue") {
    const auto cfg = make_cfg(3.0, 3, 1);
    const double r_lo = shoot_residual(cfg, 1.40, {});
    const double r_hi = shoot_residual(cfg, 1.70, {});
    CHECK(r_lo < 0.0);
    CHECK(r_hi > 0.0);
}

TEST_CASE("lambda_std(3,3,1) to 1e-8") {
    const auto cfg = make_cfg(3.0, 3, 1);
    const auto sr = solve_lambda(cfg);
    CHECK(sr.converged);
    CHECK(sr.lambda_std == doctest::Approx(1.5713126233).epsilon(1e-8));
    CHECK(sr.x_c == doctest::Approx(-0.75043223).epsilon(1e-4));
    // hits the upper common zero (Lazarus point 6) for this case
    CHECK(sr.zero_index == 1);
    CHECK(sr.bracket_history.size() > 10);
}

TEST_CASE("slab symmetry is refused") {
    const auto cfg = make_cfg(1.4, 1, 1);
    CHECK_THROWS_AS(shoot_residual(cfg, 1.3, {}), validation_error);
    CHECK_THROWS_AS(solve_lambda(cfg), validation_error);
}

TEST_CASE("cavity exists for gamma = 3, n = 3 and fails structurally for gamma = 2") {
    const auto cav3 = make_cfg(3.0, 3, 0);
    const auto sr = solve_lambda(cav3);
    CHECK(sr.converged);
    CHECK(sr.lambda_std > 1.0);
    CHECK(sr.lambda_std < 4.0);

    const auto cav2 = make_cfg(2.0, 3, 0);
    CHECK_THROWS_AS(solve_lambda(cav2), no_root_error);
}

TEST_CASE("residual changes sign exactly once across the bracket (gamma = 3 shock)") {
    const auto cfg = make_cfg(3.0, 3, 1);
    SimOdeControls ctl;
    ctl.rtol = 1e-9;
    ctl.atol = 1e-11;
    int changes = 0;
    double prev = shoot_residual(cfg, 1.05, ctl);
    for (int i = 1; i <= 24; ++i) {
        const double la = 1.05 + (2.45 - 1.05) * i / 24.0;
        const double cur = shoot_residual(cfg, la, ctl);
        if ((prev > 0) != (cur > 0)) ++changes;
        prev = cur;
    }
    CHECK(changes == 1);
}
