#include <doctest.h>

#include <cmath>

#include "simflow/quadrature.hpp"

using namespace simflow;

TEST_CASE("smooth integrand") {
    auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.converged);
}

TEST_CASE("integrable endpoint power law") {
    // int_0^1 x^{-1/2} dx = 2
    auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-300); }, 0.0, 1.0,
                                1e-9, 1e-12, 200000);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("power tail to infinity") {
    // int_1^inf x^{-2.5} dx = 1/1.5
    auto r = integrate_power_tail([](double x) { return std::pow(x, -2.5); }, 1.0, 1e-10);
    CHECK(r.value == doctest::Approx(1.0 / 1.5).epsilon(1e-8));
    // slower tail
    auto r2 = integrate_power_tail([](double x) { return std::pow(x, -1.2); }, 1.0, 1e-9);
    CHECK(r2.value == doctest::Approx(1.0 / 0.2).epsilon(1e-6));
}

TEST_CASE("steep but regular integrand via panel splitting") {
    // int_{-1}^{-1e-6} |x|^{-1.9} dx = (1e6^{0.9} - 1)/0.9
    auto f = [](double x) { return std::pow(-x, -1.9); };
    double total = 0.0;
    double lo = -1.0;
    while (std::abs(lo) > 1e-5) {
        const double hi = lo / 10.0;
        total += integrate_adaptive(f, lo, hi, 1e-11).value;
        lo = hi;
    }
    total += integrate_adaptive(f, lo, -1e-6, 1e-11).value;
    const double exact = (std::pow(1e6, 0.9) - 1.0) / 0.9;
    CHECK(total == doctest::Approx(exact).epsilon(1e-9));
}
