#include <doctest.h>

#include <cmath>

#include "simflow/ode.hpp"

using namespace simflow;
using Vec1 = Eigen::Matrix<double, 1, 1>;
using Vec2 = Eigen::Vector2d;

TEST_CASE("exponential decay to tight tolerance") {
    OdeControls ctl;
    auto term = integrate_ode<1>([](double, const Vec1& y) { return Vec1(-y[0]); }, 0.0,
                                 Vec1(1.0), 5.0, ctl);
    CHECK(term.status == OdeStatus::reached_end);
    CHECK(term.y[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-9));
}

TEST_CASE("harmonic oscillator, backward integration") {
    OdeControls ctl;
    auto rhs = [](double, const Vec2& y) { return Vec2(y[1], -y[0]); };
    auto term = integrate_ode<2>(rhs, 0.0, Vec2(1.0, 0.0), -3.0, ctl);
    CHECK(term.status == OdeStatus::reached_end);
    CHECK(term.y[0] == doctest::Approx(std::cos(3.0)).epsilon(1e-9));
    CHECK(term.y[1] == doctest::Approx(std::sin(3.0)).epsilon(1e-9));
}

TEST_CASE("event location on the dense output") {
    OdeControls ctl;
    auto rhs = [](double, const Vec2& y) { return Vec2(y[1], -y[0]); };
    std::vector<OdeEvent<2>> ev(1);
    ev[0].value = [](double, const Vec2& y) { return y[0]; };  // cos(t) = 0
    ev[0].direction = -1;
    auto term = integrate_ode<2>(rhs, 0.0, Vec2(1.0, 0.0), 10.0, ctl, ev);
    CHECK(term.status == OdeStatus::event);
    CHECK(term.t == doctest::Approx(M_PI / 2.0).epsilon(1e-11));
    CHECK(std::abs(term.y[0]) < 1e-10);
}

TEST_CASE("direction filter skips rising crossings") {
    OdeControls ctl;
    auto rhs = [](double, const Vec2& y) { return Vec2(y[1], -y[0]); };
    std::vector<OdeEvent<2>> ev(1);
    ev[0].value = [](double, const Vec2& y) { return y[0]; };
    ev[0].direction = +1;  // first rising zero of cos is at 3pi/2
    auto term = integrate_ode<2>(rhs, 0.0, Vec2(1.0, 0.0), 10.0, ctl, ev);
    CHECK(term.t == doctest::Approx(3.0 * M_PI / 2.0).epsilon(1e-10));
}

TEST_CASE("observer sees monotone accepted steps") {
    OdeControls ctl;
    ctl.max_step = 0.1;
    double prev = 0.0;
    int count = 0;
    auto term = integrate_ode<1>([](double, const Vec1& y) { return Vec1(y[0]); }, 0.0,
                                 Vec1(1.0), 2.0, ctl, {},
                                 [&](double t, const Vec1&, const DenseStep<1>&) {
                                     CHECK(t > prev);
                                     prev = t;
                                     ++count;
                                 });
    CHECK(term.status == OdeStatus::reached_end);
    CHECK(count >= 20);
}

TEST_CASE("halved tolerance reduces error") {
    auto rhs = [](double t, const Vec1& y) { return Vec1(std::cos(t) * y[0]); };
    auto run = [&](double rtol) {
        OdeControls ctl;
        ctl.rtol = rtol;
        ctl.atol = rtol * 1e-2;
        auto term = integrate_ode<1>(rhs, 0.0, Vec1(1.0), 6.0, ctl);
        return std::abs(term.y[0] - std::exp(std::sin(6.0)));
    };
    CHECK(run(1e-12) <= run(1e-6));
}
