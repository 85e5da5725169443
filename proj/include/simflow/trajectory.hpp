#pragma once

#include <string>
#include <vector>

#include "simflow/gas.hpp"
#include "simflow/interp.hpp"

namespace simflow {

enum class EventKind {
    incoming_shock,
    critical_crossing,
    origin,
    reflected_shock,
    asymptote,
    sonic_fold,    // hit C = +-(1+V) with F, G != 0: not continuable
    reached_end,
};

std::string to_string(EventKind k);

struct TrajectoryEvent {
    EventKind kind;
    double x;
};

// One smooth piece: nodes with x strictly increasing. R is reconstructed from
// the entropy integral with this piece's constant.
struct TrajectoryPiece {
    std::vector<double> x, V, C, R;
    double entropy_const = 0.0;

    size_t size() const { return x.size(); }
};

struct Trajectory {
    std::vector<TrajectoryPiece> pieces;
    std::vector<TrajectoryEvent> events;

    bool has_event(EventKind k) const {
        for (const auto& e : events)
            if (e.kind == k) return true;
        return false;
    }
    double event_x(EventKind k) const {
        for (const auto& e : events)
            if (e.kind == k) return e.x;
        throw validation_error("trajectory has no event " + to_string(k));
    }
};

inline std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::incoming_shock: return "incoming-shock";
        case EventKind::critical_crossing: return "critical-crossing";
        case EventKind::origin: return "origin";
        case EventKind::reflected_shock: return "reflected-shock";
        case EventKind::asymptote: return "asymptote";
        case EventKind::sonic_fold: return "sonic-fold";
        case EventKind::reached_end: return "reached-end";
    }
    return "?";
}

// Per-piece interpolants in xi = log|x|, built once per piece.  Nodes are
// re-oriented so the xi grid increases regardless of the sign of x.
struct PieceInterpolant {
    PchipSpline V, C, R;
    double x_lo = 0.0, x_hi = 0.0;
    bool negative_x = false;

    static PieceInterpolant build(const TrajectoryPiece& p) {
        PieceInterpolant out;
        out.x_lo = p.x.front();
        out.x_hi = p.x.back();
        out.negative_x = p.x.front() < 0.0;
        std::vector<double> xi(p.size()), v(p.size()), c(p.size()), r(p.size());
        const size_t n = p.size();
        for (size_t i = 0; i < n; ++i) {
            // reverse for x<0 so xi=log(-x) increases
            const size_t j = out.negative_x ? n - 1 - i : i;
            xi[i] = std::log(std::abs(p.x[j]));
            v[i] = p.V[j];
            c[i] = p.C[j];
            r[i] = p.R[j];
        }
        out.V = PchipSpline(xi, v);
        out.C = PchipSpline(xi, c);
        out.R = PchipSpline(xi, r);
        return out;
    }

    bool covers(double x) const {
        return (x >= std::min(x_lo, x_hi)) && (x <= std::max(x_lo, x_hi));
    }

    SimilarityState at(double x) const {
        const double xi = std::log(std::abs(x));
        return {x, V(xi), C(xi), R(xi)};
    }
};

}  // namespace simflow
