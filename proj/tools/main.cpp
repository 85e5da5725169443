#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simflow/case_io.hpp"
#include "simflow/continuation.hpp"
#include "simflow/eigenvalue.hpp"
#include "simflow/fields.hpp"
#include "simflow/fv.hpp"
#include "simflow/weak_verify.hpp"

namespace {

// exit codes: 0 ok, 1 usage, 2 validation, 3 no root, 4 integration failure,
// 5 weak-form failure
constexpr int kExitValidation = 2;
constexpr int kExitNoRoot = 3;
constexpr int kExitIntegration = 4;
constexpr int kExitWeakForm = 5;

struct GasFlags {
    double gamma = 3.0;
    int n = 3;
    std::string kind = "shock";

    simflow::GasConfig config() const {
        simflow::GasConfig cfg;
        cfg.gamma = gamma;
        cfg.n = n;
        if (kind == "shock")
            cfg.s = 1;
        else if (kind == "cavity")
            cfg.s = 0;
        else
            throw simflow::validation_error("kind must be 'shock' or 'cavity'");
        return cfg;
    }
};

struct TolFlags {
    double ode_rtol = 1e-10, ode_atol = 1e-12;
    double shoot_tol = 1e-10;
    double eps_c = 1e-6, eps_0 = 1e-8, eps_s = 1e-7;
    int series_order = 12;

    simflow::SimOdeControls controls() const {
        simflow::SimOdeControls ctl;
        ctl.rtol = ode_rtol;
        ctl.atol = ode_atol;
        ctl.eps_c = eps_c;
        ctl.eps_0 = eps_0;
        ctl.eps_s = eps_s;
        return ctl;
    }
};

void add_gas_flags(CLI::App* cmd, GasFlags& gf) {
    cmd->add_option("--gamma", gf.gamma, "adiabatic exponent (> 1)");
    cmd->add_option("--n", gf.n, "spatial dimension, 2 or 3");
    cmd->add_option("--kind", gf.kind, "shock or cavity");
}

void add_tol_flags(CLI::App* cmd, TolFlags& tf) {
    cmd->add_option("--ode-rtol", tf.ode_rtol, "ODE relative tolerance");
    cmd->add_option("--ode-atol", tf.ode_atol, "ODE absolute tolerance");
    cmd->add_option("--shoot-tol", tf.shoot_tol, "eigenvalue bisection tolerance");
    cmd->add_option("--eps-c", tf.eps_c, "sonic-point relaunch offset");
    cmd->add_option("--eps-0", tf.eps_0, "origin relaunch |x|");
    cmd->add_option("--eps-s", tf.eps_s, "cavity saddle-exit offset");
    cmd->add_option("--series-order", tf.series_order, "arc-(b) series truncation order");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(path);
    if (!os) throw simflow::validation_error("cannot write " + path);
    os << text;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    if (n <= 1) {
        v.push_back(a);
        return v;
    }
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1.0));
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial similarity flows for the compressible Euler system"};
    app.require_subcommand(1);

    // ---- solve-lambda
    auto* solve = app.add_subcommand("solve-lambda", "solve the similarity-exponent eigenvalue");
    GasFlags sg;
    TolFlags st;
    std::string solve_out;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    add_gas_flags(solve, sg);
    add_tol_flags(solve, st);
    solve->add_option("--bracket-lo", bracket_lo, "lambda bracket lower end (default: theory)");
    solve->add_option("--bracket-hi", bracket_hi, "lambda bracket upper end (default: theory)");
    solve->add_option("-o,--output", solve_out, "output JSON path (default stdout)");
    solve->set_config("--config");

    // ---- build
    auto* build = app.add_subcommand("build", "solve lambda and build the complete flow");
    GasFlags bg;
    TolFlags bt;
    std::string build_out = "case.json", build_csv;
    add_gas_flags(build, bg);
    add_tol_flags(build, bt);
    build->add_option("-o,--output", build_out, "case file path");
    build->add_option("--traj-csv", build_csv, "also write the trajectory as CSV");
    build->set_config("--config");

    // ---- fields
    auto* fields = app.add_subcommand("fields", "sample physical fields on a (t, r) grid");
    std::string fields_case = "case.json", fields_out;
    double t0 = -1.0, t1 = 1.0, r0 = 0.1, r1 = 2.0;
    int nt = 5, nr = 200;
    fields->add_option("--case", fields_case, "case file");
    fields->add_option("--t0", t0);
    fields->add_option("--t1", t1);
    fields->add_option("--nt", nt);
    fields->add_option("--r0", r0);
    fields->add_option("--r1", r1);
    fields->add_option("--nr", nr);
    fields->add_option("-o,--output", fields_out, "output CSV path (default stdout)");
    fields->set_config("--config");

    // ---- verify
    auto* verify = app.add_subcommand("verify", "weak-solution verification report");
    std::string verify_case = "case.json", verify_out;
    double rbar = 1.0;
    bool summary = false;
    std::vector<double> deltas;
    verify->add_option("--case", verify_case, "case file");
    verify->add_option("--rbar", rbar, "reference radius");
    verify->add_option("--delta", deltas, "delta sweep values (default 1e-1..1e-4)");
    verify->add_flag("--summary", summary, "print a human-readable summary to stderr");
    verify->add_option("-o,--output", verify_out, "output JSON path (default stdout)");
    verify->set_config("--config");

    // ---- crossval
    auto* crossval = app.add_subcommand("crossval", "finite-volume cross-validation");
    std::string cv_case = "case.json", cv_out, cv_snapshot;
    double tv0 = -1.0, tv1 = -0.5, rv0 = 0.05, rv1 = 2.0, cfl = 0.45;
    int cells = 1024, refine = 1;
    crossval->add_option("--case", cv_case, "case file");
    crossval->add_option("--t-start", tv0);
    crossval->add_option("--t-end", tv1);
    crossval->add_option("--r-min", rv0);
    crossval->add_option("--r-max", rv1);
    crossval->add_option("--cells", cells, "cell count (finest when --refine > 1)");
    crossval->add_option("--refine", refine, "number of refinement levels, coarsest first");
    crossval->add_option("--cfl", cfl);
    crossval->add_option("--snapshot", cv_snapshot, "write final profiles CSV");
    crossval->add_option("-o,--output", cv_out, "error-table CSV path (default stdout)");
    crossval->set_config("--config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (solve->parsed()) {
            const simflow::GasConfig cfg = sg.config();
            cfg.validate();
            auto bracket = simflow::default_bracket(cfg);
            if (bracket_lo > 0.0) bracket.first = bracket_lo;
            if (bracket_hi > 0.0) bracket.second = bracket_hi;
            const auto sr = simflow::solve_lambda(cfg, bracket, st.shoot_tol, st.controls());
            write_text(solve_out, simflow::shoot_result_to_json(cfg, sr));
        } else if (build->parsed()) {
            const simflow::GasConfig cfg = bg.config();
            cfg.validate();
            const auto sol =
                simflow::build_case(cfg, bt.controls(), bt.shoot_tol, bt.series_order);
            simflow::save_case(sol, build_out);
            std::fprintf(stderr, "lambda_std = %.12g  B = %.12g  -> %s\n", sol.lam.lambda,
                         sol.fit.B, build_out.c_str());
            if (!build_csv.empty()) {
                std::ofstream os(build_csv);
                simflow::write_trajectory_csv(sol.traj, os);
            }
        } else if (fields->parsed()) {
            const auto sol = simflow::load_case(fields_case);
            const simflow::FlowField ff(sol);
            std::ostringstream os;
            simflow::write_fields_csv(ff, linspace(t0, t1, nt), linspace(r0, r1, nr), os);
            write_text(fields_out, os.str());
        } else if (verify->parsed()) {
            const auto sol = simflow::load_case(verify_case);
            const simflow::FlowField ff(sol);
            simflow::VerifyOptions opt;
            opt.rbar = rbar;
            if (!deltas.empty()) opt.deltas = deltas;
            const auto rep = simflow::verify(ff, opt);
            write_text(verify_out, simflow::verify_report_to_json(rep));
            if (summary) std::cerr << simflow::verify_report_summary(rep);
            if (!rep.informational) {
                bool ok = rep.lambda_ok && rep.p.P1 && rep.p.P2 && rep.p.P3 && rep.integ.finite;
                for (const auto& f : rep.flux) ok = ok && f.monotone_decay;
                if (!ok) return kExitWeakForm;
            }
        } else if (crossval->parsed()) {
            const auto sol = simflow::load_case(cv_case);
            const simflow::FlowField ff(sol);
            simflow::FvControls fctl;
            fctl.cfl = cfl;
            std::ostringstream os;
            os << "cells,l1_rho,l1_rho_rel,l1_u,l1_p,linf_rho,shock_cells,steps\n";
            for (int lvl = refine - 1; lvl >= 0; --lvl) {
                const int nc = cells >> lvl;
                auto grid = simflow::init_from_similarity(ff, tv0, rv0, rv1, nc, fctl);
                const auto stats = simflow::advance(grid, ff, tv1, fctl);
                const auto err = simflow::error_norms(grid, ff, tv1);
                char line[256];
                std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%ld\n",
                              nc, err.l1_rho, err.l1_rho_rel, err.l1_u, err.l1_p, err.linf_rho,
                              err.shock_cells, stats.steps);
                os << line;
                if (lvl == 0 && !cv_snapshot.empty()) {
                    std::ofstream snap(cv_snapshot);
                    snap << "r,rho,u,p,rho_exact,u_exact,p_exact\n";
                    for (int i = 0; i < grid.n_cells; ++i) {
                        const double r = grid.center(i);
                        const auto s = ff.sample(tv1, r);
                        const double rho = grid.rho[i];
                        const double u = grid.mom[i] / rho;
                        const double p =
                            (grid.gamma - 1.0) * (grid.ene[i] - 0.5 * rho * u * u);
                        char row[256];
                        std::snprintf(row, sizeof row, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                                      r, rho, u, p, s.rho, s.u, s.p);
                        snap << row;
                    }
                }
            }
            write_text(cv_out, os.str());
        }
    } catch (const simflow::no_root_error& e) {
        std::fprintf(stderr, "no-root: %s\n", e.what());
        return kExitNoRoot;
    } catch (const simflow::validation_error& e) {
        std::fprintf(stderr, "validation: %s\n", e.what());
        return kExitValidation;
    } catch (const simflow::weak_form_error& e) {
        std::fprintf(stderr, "weak-form: %s\n", e.what());
        return kExitWeakForm;
    } catch (const simflow::integration_error& e) {
        std::fprintf(stderr, "integration: %s\n", e.what());
        return kExitIntegration;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return 0;
}
