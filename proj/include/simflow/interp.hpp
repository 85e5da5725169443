#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "simflow/errors.hpp"

namespace simflow {

// Fritsch-Carlson monotone piecewise cubic (PCHIP). Preserves local
// monotonicity of the data, which keeps interpolated profiles free of
// overshoot at shocks and event-adjacent nodes.
class PchipSpline {
  public:
    PchipSpline() = default;

    PchipSpline(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw validation_error("pchip needs >= 2 nodes");
        d_.resize(n);
        if (n == 2) {
            d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
            return;
        }
        std::vector<double> h(n - 1), del(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            del[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        for (size_t i = 1; i + 1 < n; ++i) {
            if (del[i - 1] * del[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        d_[0] = edge(h[0], h[1], del[0], del[1]);
        d_[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }

    double operator()(double x) const {
        const size_t i = locate(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
    }

    double derivative(double x) const {
        const size_t i = locate(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double dh00 = (6 * t * t - 6 * t) / h, dh10 = 3 * t * t - 4 * t + 1;
        const double dh01 = (-6 * t * t + 6 * t) / h, dh11 = 3 * t * t - 2 * t;
        return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    static double edge(double h0, double h1, double del0, double del1) {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0)
            d = 0.0;
        else if (del0 * del1 < 0.0 && std::abs(d) > 3.0 * std::abs(del0))
            d = 3.0 * del0;
        return d;
    }

    size_t locate(double x) const {
        size_t lo = 0, hi = x_.size() - 1;
        if (x <= x_[0]) return 0;
        if (x >= x_[hi]) return hi - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<double> x_, y_, d_;
};

// Neville polynomial extrapolation of (xs, ys) to x = 0.
inline double extrapolate_to_zero(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> v = ys;
    const size_t n = v.size();
    for (size_t m = 1; m < n; ++m)
        for (size_t i = 0; i + m < n; ++i)
            v[i] = v[i + 1] + (v[i + 1] - v[i]) * xs[i + m] / (xs[i] - xs[i + m]);
    return v[0];
}

}  // namespace simflow
