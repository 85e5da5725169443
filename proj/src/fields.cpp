#include "simflow/fields.hpp"

#include <cmath>

namespace simflow {

std::string to_string(Region r) {
    switch (r) {
        case Region::quiescent: return "quiescent";
        case Region::vacuum: return "vacuum";
        case Region::pre_collapse_fluid: return "pre-collapse-fluid";
        case Region::post_collapse_pre_shock: return "post-collapse-pre-shock";
        case Region::post_collapse_post_shock: return "post-collapse-post-shock";
    }
    return "?";
}

FlowField::FlowField(const SolutionCase& sol) : sol_(&sol) {
    if (sol.traj.pieces.size() != 4)
        throw validation_error("FlowField needs a completed 4-piece solution");
    for (const auto& p : sol.traj.pieces) interp_.push_back(PieceInterpolant::build(p));
    x_last_ = sol.traj.pieces.back().x.back();
}

ProfileRatios FlowField::ratios_at(double x) const {
    const auto& cfg = sol_->cfg;
    const auto& lam = sol_->lam;
    ProfileRatios pr;
    if (x < -1.0) {
        pr.region = (cfg.s == 1) ? Region::quiescent : Region::vacuum;
        pr.R = (cfg.s == 1) ? 1.0 : 0.0;
        return pr;
    }
    pr.region = (x < 0.0)       ? Region::pre_collapse_fluid
                : (x < sol_->fit.B) ? Region::post_collapse_pre_shock
                                    : Region::post_collapse_post_shock;
    const double eps0 = sol_->controls.eps_0;
    if (std::abs(x) < eps0) {
        // star-point zone: V/x and C/x continuous with limits (ell, L)
        pr.V_over_x = sol_->ell;
        pr.C_over_x = sol_->L;
        pr.V = sol_->ell * x;
        pr.C = sol_->L * x;
        pr.R = sol_->R0;
        return pr;
    }
    if (x > x_last_) {
        // beyond the last arc-(b) node: truncated series, valid since w is small
        const double w = sol_->fit.k * std::pow(x, -lam.sigma);
        const auto vc = sol_->fit.series.eval(w);
        pr.V = vc.first;
        pr.C = vc.second;
        pr.V_over_x = pr.V / x;
        pr.C_over_x = pr.C / x;
        pr.R = density_from_integral(cfg, lam, sol_->K_post, pr.C_over_x, pr.V);
        return pr;
    }
    for (const auto& pi : interp_) {
        if (pi.covers(x)) {
            const SimilarityState st = pi.at(x);
            pr.V = st.V;
            pr.C = st.C;
            pr.R = st.R;
            pr.V_over_x = st.V / x;
            pr.C_over_x = st.C / x;
            return pr;
        }
    }
    throw extend_range_error("x = " + std::to_string(x) +
                             " outside the computed range and series validity");
}

FlowSample FlowField::sample(double t, double r) const {
    if (!(r > 0.0)) throw validation_error("sample needs r > 0");
    const auto& cfg = sol_->cfg;
    const auto& lam = sol_->lam;
    const double x = t / std::pow(r, lam.lambda);

    FlowSample fs;
    fs.t = t;
    fs.r = r;
    const ProfileRatios pr = ratios_at(x);
    fs.region = pr.region;
    if (pr.region == Region::quiescent) {
        fs.rho = 1.0;
        return fs;
    }
    if (pr.region == Region::vacuum) return fs;

    const double amp = -std::pow(r, 1.0 - lam.lambda) / lam.lambda;
    fs.u = amp * pr.V_over_x;
    fs.c = amp * pr.C_over_x;
    fs.rho = std::pow(r, lam.kappa) * pr.R;
    const EosFields eos = eos_fields(cfg, fs.rho, fs.c);
    fs.p = eos.p;
    fs.e = eos.e;
    return fs;
}

std::vector<FlowField::CollapseRow> FlowField::collapse_profile(
    const std::vector<double>& r_grid) const {
    const auto& cfg = sol_->cfg;
    const auto& lam = sol_->lam;
    std::vector<CollapseRow> rows;
    rows.reserve(r_grid.size());
    for (double r : r_grid) {
        CollapseRow row;
        row.r = r;
        const double amp = -std::pow(r, 1.0 - lam.lambda) / lam.lambda;
        row.u = amp * sol_->ell;
        row.c = amp * sol_->L;
        row.rho = std::pow(r, lam.kappa) * sol_->R0;
        const EosFields eos = eos_fields(cfg, row.rho, row.c);
        row.p = eos.p;
        row.theta = eos.theta;
        rows.push_back(row);
    }
    return rows;
}

double FlowField::incoming_shock_radius(double t) const {
    if (!(t < 0.0)) throw validation_error("incoming shock path is defined for t < 0");
    return std::pow(-t, 1.0 / sol_->lam.lambda);
}

double FlowField::outgoing_shock_radius(double t) const {
    if (!(t > 0.0)) throw validation_error("outgoing shock path is defined for t > 0");
    return std::pow(t / sol_->fit.B, 1.0 / sol_->lam.lambda);
}

}  // namespace simflow
