#include "simflow/case_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace simflow {

using nlohmann::json;

namespace {

json piece_to_json(const TrajectoryPiece& p) {
    return json{{"x", p.x}, {"V", p.V}, {"C", p.C}, {"R", p.R}, {"K", p.entropy_const}};
}

TrajectoryPiece piece_from_json(const json& j) {
    TrajectoryPiece p;
    p.x = j.at("x").get<std::vector<double>>();
    p.V = j.at("V").get<std::vector<double>>();
    p.C = j.at("C").get<std::vector<double>>();
    p.R = j.at("R").get<std::vector<double>>();
    p.entropy_const = j.at("K").get<double>();
    return p;
}

EventKind event_kind_from_string(const std::string& s) {
    for (EventKind k :
         {EventKind::incoming_shock, EventKind::critical_crossing, EventKind::origin,
          EventKind::reflected_shock, EventKind::asymptote, EventKind::sonic_fold,
          EventKind::reached_end})
        if (to_string(k) == s) return k;
    throw validation_error("unknown event kind: " + s);
}

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string case_to_json(const SolutionCase& sol) {
    json j;
    j["schema"] = kCaseSchema;
    j["gas"] = {{"gamma", sol.cfg.gamma}, {"n", sol.cfg.n}, {"s", sol.cfg.s}, {"cv", sol.cfg.cv}};
    j["lambda"] = {{"lambda", sol.lam.lambda}, {"kappa", sol.lam.kappa},
                   {"q", sol.lam.q},           {"V0", sol.lam.V0},
                   {"sigma", sol.lam.sigma}};
    j["shoot"] = {{"lambda_std", sol.shoot.lambda_std},
                  {"crossing_V", sol.shoot.crossing_V},
                  {"crossing_C", sol.shoot.crossing_C},
                  {"x_c", sol.shoot.x_c},
                  {"zero_index", sol.shoot.zero_index},
                  {"converged", sol.shoot.converged}};
    j["limits"] = {{"ell", sol.ell}, {"L", sol.L}, {"R0", sol.R0}};
    j["entropy"] = {{"K_pre", sol.K_pre}, {"K_post", sol.K_post}};
    j["fit"] = {{"B", sol.fit.B},         {"w1", sol.fit.w1},         {"k", sol.fit.k},
                {"pre_V", sol.fit.pre_V}, {"pre_C", sol.fit.pre_C},   {"post_V", sol.fit.post_V},
                {"post_C", sol.fit.post_C}, {"R_pre", sol.fit.R_pre}, {"R_post", sol.fit.R_post},
                {"series_a", sol.fit.series.a}, {"series_b", sol.fit.series.b},
                {"series_order", sol.fit.series.order}};
    j["controls"] = {{"rtol", sol.controls.rtol},   {"atol", sol.controls.atol},
                     {"eps_c", sol.controls.eps_c}, {"eps_0", sol.controls.eps_0},
                     {"eps_s", sol.controls.eps_s}, {"max_dxi", sol.controls.max_dxi}};
    j["pieces"] = json::array();
    for (const auto& p : sol.traj.pieces) j["pieces"].push_back(piece_to_json(p));
    j["arc_a_full"] = piece_to_json(sol.arc_a_full);
    j["events"] = json::array();
    for (const auto& e : sol.traj.events)
        j["events"].push_back({{"kind", to_string(e.kind)}, {"x", e.x}});
    return j.dump(1);
}

SolutionCase case_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != kCaseSchema)
        throw validation_error("unsupported case schema: " + j.at("schema").get<std::string>());
    SolutionCase sol;
    sol.cfg.gamma = j.at("gas").at("gamma").get<double>();
    sol.cfg.n = j.at("gas").at("n").get<int>();
    sol.cfg.s = j.at("gas").at("s").get<int>();
    sol.cfg.cv = j.at("gas").at("cv").get<double>();
    sol.lam.lambda = j.at("lambda").at("lambda").get<double>();
    sol.lam.kappa = j.at("lambda").at("kappa").get<double>();
    sol.lam.q = j.at("lambda").at("q").get<double>();
    sol.lam.V0 = j.at("lambda").at("V0").get<double>();
    sol.lam.sigma = j.at("lambda").at("sigma").get<double>();
    sol.shoot.lambda_std = j.at("shoot").at("lambda_std").get<double>();
    sol.shoot.crossing_V = j.at("shoot").at("crossing_V").get<double>();
    sol.shoot.crossing_C = j.at("shoot").at("crossing_C").get<double>();
    sol.shoot.x_c = j.at("shoot").at("x_c").get<double>();
    sol.shoot.zero_index = j.at("shoot").at("zero_index").get<int>();
    sol.shoot.converged = j.at("shoot").at("converged").get<bool>();
    sol.ell = j.at("limits").at("ell").get<double>();
    sol.L = j.at("limits").at("L").get<double>();
    sol.R0 = j.at("limits").at("R0").get<double>();
    sol.K_pre = j.at("entropy").at("K_pre").get<double>();
    sol.K_post = j.at("entropy").at("K_post").get<double>();
    const auto& f = j.at("fit");
    sol.fit.B = f.at("B").get<double>();
    sol.fit.w1 = f.at("w1").get<double>();
    sol.fit.k = f.at("k").get<double>();
    sol.fit.pre_V = f.at("pre_V").get<double>();
    sol.fit.pre_C = f.at("pre_C").get<double>();
    sol.fit.post_V = f.at("post_V").get<double>();
    sol.fit.post_C = f.at("post_C").get<double>();
    sol.fit.R_pre = f.at("R_pre").get<double>();
    sol.fit.R_post = f.at("R_post").get<double>();
    sol.fit.series.a = f.at("series_a").get<std::vector<double>>();
    sol.fit.series.b = f.at("series_b").get<std::vector<double>>();
    sol.fit.series.order = f.at("series_order").get<int>();
    const auto& c = j.at("controls");
    sol.controls.rtol = c.at("rtol").get<double>();
    sol.controls.atol = c.at("atol").get<double>();
    sol.controls.eps_c = c.at("eps_c").get<double>();
    sol.controls.eps_0 = c.at("eps_0").get<double>();
    sol.controls.eps_s = c.at("eps_s").get<double>();
    sol.controls.max_dxi = c.at("max_dxi").get<double>();
    for (const auto& pj : j.at("pieces")) sol.traj.pieces.push_back(piece_from_json(pj));
    sol.arc_a_full = piece_from_json(j.at("arc_a_full"));
    for (const auto& ej : j.at("events"))
        sol.traj.events.push_back(
            {event_kind_from_string(ej.at("kind").get<std::string>()), ej.at("x").get<double>()});
    return sol;
}

void save_case(const SolutionCase& sol, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw validation_error("cannot write " + path);
    os << case_to_json(sol);
}

SolutionCase load_case(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw validation_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return case_from_json(ss.str());
}

std::string shoot_result_to_json(const GasConfig& cfg, const ShootResult& sr) {
    json j;
    j["gas"] = {{"gamma", cfg.gamma}, {"n", cfg.n}, {"kind", cfg.s == 1 ? "shock" : "cavity"}};
    j["lambda_std"] = sr.lambda_std;
    j["crossing"] = {{"V", sr.crossing_V}, {"C", sr.crossing_C}, {"x_c", sr.x_c}};
    j["zero_index"] = sr.zero_index;
    j["converged"] = sr.converged;
    json hist = json::array();
    for (const auto& h : sr.bracket_history) hist.push_back({{"lambda", h.first}, {"residual", h.second}});
    j["bracket_history"] = hist;
    return j.dump(1);
}

std::string verify_report_to_json(const VerifyReport& rep) {
    json j;
    j["lambda_ok"] = rep.lambda_ok;
    j["informational"] = rep.informational;
    j["rbar"] = rep.rbar;
    j["P"] = {{"P1", rep.p.P1},
              {"P2", rep.p.P2},
              {"P3", rep.p.P3},
              {"one_plus_V_min", rep.p.one_plus_V_min},
              {"one_plus_V_max", rep.p.one_plus_V_max},
              {"ell", rep.p.ell},
              {"L", rep.p.L},
              {"V_far_gap", rep.p.V_far_gap},
              {"x_far", rep.p.x_far}};
    j["continuity"] = json::array();
    for (const auto& r : rep.continuity.rows)
        j["continuity"].push_back({{"t", r.t},
                                   {"M", r.vals.M},
                                   {"I", r.vals.I},
                                   {"EK", r.vals.EK},
                                   {"EP", r.vals.EP},
                                   {"rel_gap", r.rel_gap}});
    j["at_collapse"] = {{"M", rep.continuity.at_collapse.M},
                        {"I", rep.continuity.at_collapse.I},
                        {"EK", rep.continuity.at_collapse.EK},
                        {"EP", rep.continuity.at_collapse.EP}};
    j["limit_gap"] = rep.continuity.limit_gap;
    j["integrability"] = {{"I2", rep.integ.I2}, {"I3", rep.integ.I3},     {"P0", rep.integ.P0},
                          {"P1", rep.integ.P1}, {"finite", rep.integ.finite},
                          {"tail_condition", rep.integ.tail_condition}};
    j["flux_residuals"] = json::array();
    for (const auto& f : rep.flux) {
        const char* law = f.law == ConservationLaw::mass       ? "mass"
                          : f.law == ConservationLaw::momentum ? "momentum"
                                                               : "energy";
        j["flux_residuals"].push_back({{"equation", law},
                                       {"deltas", f.deltas},
                                       {"residuals", f.residuals},
                                       {"fitted_exponent", f.fitted_exponent},
                                       {"predicted_exponent", f.predicted_exponent},
                                       {"monotone_decay", f.monotone_decay}});
    }
    j["two_route"] = json::array();
    for (const auto& r : rep.two_route)
        j["two_route"].push_back({{"t", r.t}, {"rbar", r.rbar}, {"worst_rel", r.worst_rel}});
    return j.dump(1);
}

std::string verify_report_summary(const VerifyReport& rep) {
    std::ostringstream os;
    auto yn = [](bool b) { return b ? "yes" : "NO"; };
    os << "weak-solution verification (rbar = " << fmt12(rep.rbar) << ")";
    if (rep.informational) os << "  [informational: cavity case]";
    os << "\n";
    os << "  lambda_ok (1 < lambda < 1+n/2): " << yn(rep.lambda_ok) << "\n";
    os << "  (P1) 1+V in [" << fmt12(rep.p.one_plus_V_min) << ", " << fmt12(rep.p.one_plus_V_max)
       << "]: " << yn(rep.p.P1) << "\n";
    os << "  (P2) ell = " << fmt12(rep.p.ell) << ", L = " << fmt12(rep.p.L) << ": "
       << yn(rep.p.P2) << "\n";
    os << "  (P3) |V - V0| at x = " << fmt12(rep.p.x_far) << ": " << fmt12(rep.p.V_far_gap)
       << ": " << yn(rep.p.P3) << "\n";
    os << "  continuity at collapse, one-sided relative gaps (M, I, EK, EP):";
    for (double g : rep.continuity.limit_gap) os << " " << fmt12(g);
    os << "\n";
    os << "  integrability: I2 = " << fmt12(rep.integ.I2) << ", I3 = " << fmt12(rep.integ.I3)
       << ", P0 = " << fmt12(rep.integ.P0) << ", P1 = " << fmt12(rep.integ.P1)
       << ", finite: " << yn(rep.integ.finite) << "\n";
    for (const auto& f : rep.flux) {
        const char* law = f.law == ConservationLaw::mass       ? "mass    "
                          : f.law == ConservationLaw::momentum ? "momentum"
                                                               : "energy  ";
        os << "  flux " << law << " fitted exp " << fmt12(f.fitted_exponent) << " (predicted "
           << fmt12(f.predicted_exponent) << "), monotone decay: " << yn(f.monotone_decay)
           << "\n";
    }
    double worst = 0.0;
    for (const auto& r : rep.two_route) worst = std::max(worst, r.worst_rel);
    os << "  two-route consistency, worst relative gap: " << fmt12(worst) << "\n";
    return os.str();
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << "x,V,C,R,piece,event\n";
    for (size_t pi = 0; pi < traj.pieces.size(); ++pi) {
        const auto& p = traj.pieces[pi];
        for (size_t i = 0; i < p.size(); ++i) {
            std::string ev;
            for (const auto& e : traj.events)
                if (e.x == p.x[i]) ev = to_string(e.kind);
            os << fmt12(p.x[i]) << ',' << fmt12(p.V[i]) << ',' << fmt12(p.C[i]) << ','
               << fmt12(p.R[i]) << ',' << pi << ',' << ev << '\n';
        }
    }
}

void write_fields_csv(const FlowField& ff, const std::vector<double>& ts,
                      const std::vector<double>& rs, std::ostream& os) {
    os << "t,r,rho,u,c,p,region\n";
    for (double t : ts)
        for (double r : rs) {
            const FlowSample s = ff.sample(t, r);
            os << fmt12(t) << ',' << fmt12(r) << ',' << fmt12(s.rho) << ',' << fmt12(s.u) << ','
               << fmt12(s.c) << ',' << fmt12(s.p) << ',' << to_string(s.region) << '\n';
        }
}

}  // namespace simflow
