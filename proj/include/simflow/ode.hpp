#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "simflow/errors.hpp"

// Embedded Dormand-Prince 5(4) pair with the classic 4th-order continuous
// extension, sign-change event location on the dense output, and a step
// observer. State is any fixed-size Eigen column vector.

namespace simflow {

struct OdeControls {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 = auto
    long max_steps = 2'000'000;
    double event_tol = 1e-13;  // in the independent variable
};

template <int N>
struct OdeEvent {
    using State = Eigen::Matrix<double, N, 1>;
    std::function<double(double, const State&)> value;
    int direction = 0;  // +1 rising, -1 falling, 0 any
    bool terminal = true;
};

enum class OdeStatus { reached_end, event, step_failure };

template <int N>
struct OdeTermination {
    OdeStatus status = OdeStatus::reached_end;
    int event_index = -1;
    double t = 0.0;
    Eigen::Matrix<double, N, 1> y;
    long n_steps = 0;
};

namespace detail {

// Dormand-Prince tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace detail

// Dense interpolant over one accepted step.
template <int N>
struct DenseStep {
    using State = Eigen::Matrix<double, N, 1>;
    double t0 = 0, h = 0;
    State r1, r2, r3, r4, r5;

    State eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

template <int N, typename Rhs>
class DormandPrince {
  public:
    using State = Eigen::Matrix<double, N, 1>;

    DormandPrince(Rhs rhs, OdeControls ctl) : rhs_(std::move(rhs)), ctl_(ctl) {}

    // Integrates from (t0, y0) toward t_end. The observer is called with
    // (t, y, dense) after every accepted step; events are located on the dense
    // interpolant by bisection.
    OdeTermination<N> run(double t0, const State& y0, double t_end,
                          const std::vector<OdeEvent<N>>& events = {},
                          const std::function<void(double, const State&, const DenseStep<N>&)>&
                              observer = nullptr) {
        using namespace detail;
        const double dir = (t_end >= t0) ? 1.0 : -1.0;
        double t = t0;
        State y = y0;
        State k1 = rhs_(t, y);
        double h = ctl_.initial_step > 0 ? ctl_.initial_step : initial_step(t, y, k1, dir);
        h = std::min(h, ctl_.max_step);

        std::vector<double> ev_prev(events.size());
        for (size_t i = 0; i < events.size(); ++i) ev_prev[i] = events[i].value(t, y);

        OdeTermination<N> term;
        for (long step = 0; step < ctl_.max_steps; ++step) {
            if (dir * (t - t_end) >= 0.0) {
                term.status = OdeStatus::reached_end;
                term.t = t;
                term.y = y;
                term.n_steps = step;
                return term;
            }
            h = std::min(h, std::abs(t_end - t));
            bool last = std::abs(h) >= std::abs(t_end - t) - 1e-30;

            State k2, k3, k4, k5, k6, k7, y1;
            double err;
            for (;;) {
                const double hd = dir * h;
                k2 = rhs_(t + c2 * hd, y + hd * (a21 * k1));
                k3 = rhs_(t + c3 * hd, y + hd * (a31 * k1 + a32 * k2));
                k4 = rhs_(t + c4 * hd, y + hd * (a41 * k1 + a42 * k2 + a43 * k3));
                k5 = rhs_(t + c5 * hd, y + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
                k6 = rhs_(t + hd, y + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
                y1 = y + hd * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
                k7 = rhs_(t + hd, y1);
                const State ye =
                    hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
                err = 0.0;
                for (int i = 0; i < N; ++i) {
                    const double sc =
                        ctl_.atol + ctl_.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
                    const double r = ye[i] / sc;
                    err += r * r;
                }
                err = std::sqrt(err / N);
                if (err <= 1.0 || !std::isfinite(err)) break;
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                last = false;
                if (h < 1e-14 * std::max(1.0, std::abs(t)))
                    return fail(t, y, step);
            }
            if (!std::isfinite(err)) return fail(t, y, step);

            const double hd = dir * h;
            DenseStep<N> ds;
            ds.t0 = t;
            ds.h = hd;
            ds.r1 = y;
            ds.r2 = y1 - y;
            ds.r3 = hd * k1 - ds.r2;
            ds.r4 = ds.r2 - hd * k7 - ds.r3;
            ds.r5 = hd * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            const double t1 = last ? t_end : t + hd;

            // event scan on this step
            for (size_t i = 0; i < events.size(); ++i) {
                const double v1 = events[i].value(t1, y1);
                const bool rising = ev_prev[i] < 0.0 && v1 >= 0.0;
                const bool falling = ev_prev[i] > 0.0 && v1 <= 0.0;
                const bool crossed = (rising && events[i].direction >= 0) ||
                                     (falling && events[i].direction <= 0);
                if (crossed) {
                    double ta = t, tb = t1, va = ev_prev[i];
                    while (std::abs(tb - ta) > ctl_.event_tol * std::max(1.0, std::abs(ta))) {
                        const double tm = 0.5 * (ta + tb);
                        const double vm = events[i].value(tm, ds.eval(tm));
                        if ((va <= 0.0) == (vm <= 0.0)) {
                            ta = tm;
                            va = vm;
                        } else {
                            tb = tm;
                        }
                    }
                    const double te = 0.5 * (ta + tb);
                    if (events[i].terminal) {
                        term.status = OdeStatus::event;
                        term.event_index = static_cast<int>(i);
                        term.t = te;
                        term.y = ds.eval(te);
                        term.n_steps = step;
                        if (observer) observer(term.t, term.y, ds);
                        return term;
                    }
                }
                ev_prev[i] = v1;
            }

            t = t1;
            y = y1;
            k1 = k7;  // FSAL
            if (observer) observer(t, y, ds);

            h = h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
            h = std::min(h, ctl_.max_step);
        }
        throw integration_error("ODE step budget exhausted at t = " + std::to_string(t));
    }

  private:
    OdeTermination<N> fail(double t, const State& y, long step) const {
        OdeTermination<N> term;
        term.status = OdeStatus::step_failure;
        term.t = t;
        term.y = y;
        term.n_steps = step;
        return term;
    }

    double initial_step(double t, const State& y, const State& f, double dir) const {
        (void)t;
        (void)dir;
        const double ny = y.norm(), nf = f.norm();
        double h = (ny > 1e-12 && nf > 1e-12) ? 0.01 * ny / nf : 1e-6;
        return std::min(h, ctl_.max_step);
    }

    Rhs rhs_;
    OdeControls ctl_;
};

template <int N, typename Rhs>
OdeTermination<N> integrate_ode(Rhs&& rhs, double t0, const Eigen::Matrix<double, N, 1>& y0,
                                double t_end, const OdeControls& ctl,
                                const std::vector<OdeEvent<N>>& events = {},
                                const std::function<void(double, const Eigen::Matrix<double, N, 1>&,
                                                         const DenseStep<N>&)>& obs = nullptr) {
    DormandPrince<N, std::decay_t<Rhs>> solver(std::forward<Rhs>(rhs), ctl);
    return solver.run(t0, y0, t_end, events, obs);
}

}  // namespace simflow
