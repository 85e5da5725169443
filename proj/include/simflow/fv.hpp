#pragma once

#include <Eigen/Core>

#include "simflow/fields.hpp"

// Radial finite-volume Euler solver for cross-validation: MUSCL-Hancock with
// HLLC fluxes on r^m-weighted cells and the well-balanced geometric pressure
// source, advanced from an exact similarity profile and compared against it.

namespace simflow {

struct RadialGrid {
    double r_min = 0.0, r_max = 0.0;
    int n_cells = 0;
    double gamma = 0.0;
    int m = 0;                 // 1 cylindrical, 2 spherical
    Eigen::ArrayXd rho, mom, ene;  // cell averages of (rho, rho u, E)
    double time = 0.0;

    double dr() const { return (r_max - r_min) / n_cells; }
    double edge(int i) const { return r_min + i * dr(); }
    double center(int i) const { return r_min + (i + 0.5) * dr(); }
    // r^m-weighted cell volume
    double volume(int i) const {
        const double a = edge(i), b = edge(i + 1);
        return (std::pow(b, m + 1) - std::pow(a, m + 1)) / (m + 1);
    }
    double total_mass() const {
        double s = 0.0;
        for (int i = 0; i < n_cells; ++i) s += rho[i] * volume(i);
        return s;
    }
};

struct FvControls {
    double cfl = 0.45;
    double plm_theta = 1.5;      // MC-limiter weight
    double density_floor = 1e-12;
    double pressure_floor = 1e-14;
};

// Cell averages of (rho, rho u, E) from the exact sampler (3-point Gauss).
RadialGrid init_from_similarity(const FlowField& ff, double t_start, double r_min, double r_max,
                                int n_cells, const FvControls& ctl = {});

struct AdvanceStats {
    long steps = 0;
    double boundary_mass_flux = 0.0;  // net r^m-weighted mass inflow through the ends
    int floor_activations = 0;
};

// MUSCL-Hancock / HLLC advance with exact similarity states as time-dependent
// Dirichlet boundary data. Positivity violations reject the step and halve dt.
AdvanceStats advance(RadialGrid& g, const FlowField& ff, double t_end, const FvControls& ctl = {});

struct ErrorNorms {
    double l1_rho = 0.0, l1_u = 0.0, l1_p = 0.0;
    double linf_rho = 0.0, linf_u = 0.0, linf_p = 0.0;
    double l1_rho_rel = 0.0;  // relative to ||rho_exact||_L1
    double shock_cells = 0.0; // |captured - exact| shock position in cell widths
};

ErrorNorms error_norms(const RadialGrid& g, const FlowField& ff, double t);

// HLLC flux between two primitive states (rho, u, p); exposed for unit tests
// against the exact Riemann solution.
Eigen::Vector3d hllc_flux(double gamma, const Eigen::Vector3d& prim_l,
                          const Eigen::Vector3d& prim_r);

}  // namespace simflow
