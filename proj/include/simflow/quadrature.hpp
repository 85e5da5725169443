#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "simflow/errors.hpp"

// Adaptive Gauss-Kronrod 7/15 quadrature plus helpers for improper tails.

namespace simflow {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

namespace detail {

// Kronrod-15 abscissae/weights and embedded Gauss-7 weights on [-1,1].
constexpr double gk_x[8] = {0.000000000000000000000000000000000e+00,
                            2.077849550078984676006894037732449e-01,
                            4.058451513773971669066064120769615e-01,
                            5.860872354676911302941448382587296e-01,
                            7.415311855993944398638647732807884e-01,
                            8.648644233597690727897127886409262e-01,
                            9.491079123427585245261896840478513e-01,
                            9.914553711208126392068546975263285e-01};
constexpr double gk_wk[8] = {2.094821410847278280129991748917143e-01,
                             2.044329400752988924141619992346491e-01,
                             1.903505780647854099132564024210137e-01,
                             1.690047266392679028265834265985503e-01,
                             1.406532597155259187451895905102379e-01,
                             1.047900103222501838398763225415180e-01,
                             6.309209262997855329070066318920429e-02,
                             2.293532201052922496373200805896959e-02};
constexpr double gk_wg[4] = {4.179591836734693877551020408163265e-01,
                             3.818300505051189449503697754889751e-01,
                             2.797053914892766679014677714237796e-01,
                             1.294849661688696932706114326790820e-01};

}  // namespace detail

template <typename F>
QuadResult gauss_kronrod_15(const F& f, double a, double b) {
    using namespace detail;
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double f0 = f(c);
    double k = gk_wk[0] * f0;
    double g = gk_wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hl * gk_x[i];
        const double s = f(c + dx) + f(c - dx);
        k += gk_wk[i] * s;
        if (i % 2 == 0) g += gk_wg[i / 2] * s;
    }
    k *= hl;
    g *= hl;
    QuadResult r;
    r.value = k;
    const double d = std::abs(k - g);
    // plain |K - G| is a conservative estimate; panels are cheap enough
    r.error = std::max(d, 1e-300);
    return r;
}

// Adaptive bisection on an interval stack. Handles integrable endpoint
// behavior by subdivision; callers split at interior kinks themselves.
template <typename F>
QuadResult integrate_adaptive(const F& f, double a, double b, double rtol = 1e-10,
                              double atol = 1e-14, int max_intervals = 20000) {
    if (a == b) return {0.0, 0.0, true};
    struct Iv {
        double a, b, val, err;
    };
    std::vector<Iv> stack;
    QuadResult w = gauss_kronrod_15(f, a, b);
    stack.push_back({a, b, w.value, w.error});
    double total = w.value, toterr = w.error;
    int used = 1;
    while (toterr > atol + rtol * std::abs(total) && used < max_intervals) {
        // split worst interval
        size_t worst = 0;
        for (size_t i = 1; i < stack.size(); ++i)
            if (stack[i].err > stack[worst].err) worst = i;
        const Iv iv = stack[worst];
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
        const double m = 0.5 * (iv.a + iv.b);
        QuadResult l = gauss_kronrod_15(f, iv.a, m);
        QuadResult r = gauss_kronrod_15(f, m, iv.b);
        total += l.value + r.value - iv.val;
        toterr += l.error + r.error - iv.err;
        stack.push_back({iv.a, m, l.value, l.error});
        stack.push_back({m, iv.b, r.value, r.error});
        used += 2;
        if (m == iv.a || m == iv.b) break;  // interval at machine resolution
    }
    QuadResult res;
    res.value = total;
    res.error = toterr;
    res.converged = toterr <= atol + rtol * std::abs(total) + 1e-300;
    return res;
}

// Integral over [a, inf) of a function decaying like a power law: geometric
// panels with a remainder estimate from the last two panel values.
template <typename F>
QuadResult integrate_power_tail(const F& f, double a, double rtol = 1e-10, double ratio = 4.0,
                                int max_panels = 200) {
    QuadResult out;
    double lo = a;
    double prev = 0.0;
    for (int p = 0; p < max_panels; ++p) {
        const double hi = lo * ratio;
        QuadResult r = integrate_adaptive(f, lo, hi, rtol * 0.1, 1e-300, 2000);
        out.value += r.value;
        out.error += r.error;
        if (p > 0 && std::abs(r.value) < std::abs(prev)) {
            // geometric decay of panel sums: remainder <= next * rho/(1-rho)
            const double rho = std::abs(r.value) / std::max(std::abs(prev), 1e-300);
            if (rho < 1.0) {
                const double rem = std::abs(r.value) * rho / (1.0 - rho);
                if (rem < rtol * std::abs(out.value)) {
                    out.error += rem;
                    return out;
                }
            }
        }
        prev = r.value;
        lo = hi;
    }
    out.converged = false;
    return out;
}

}  // namespace simflow
