#pragma once

#include <vector>

#include "simflow/continuation.hpp"
#include "simflow/trajectory.hpp"

// Physical-field reconstruction: maps the completed similarity solution to
// (t, r) space through the ansatz
//   u = -(r^(1-lambda)/lambda) V(x)/x,  c likewise with C,  rho = r^kappa R(x).

namespace simflow {

enum class Region {
    quiescent,
    vacuum,
    pre_collapse_fluid,
    post_collapse_pre_shock,
    post_collapse_post_shock,
};

std::string to_string(Region r);

struct FlowSample {
    double t = 0.0, r = 0.0;
    double rho = 0.0, u = 0.0, c = 0.0, p = 0.0, e = 0.0;
    Region region = Region::quiescent;
};

// Similarity profile ratios at a given x. V/x and C/x are the quantities the
// physical fields need; both stay finite through x = 0.
struct ProfileRatios {
    double V = 0.0, C = 0.0, R = 0.0;
    double V_over_x = 0.0, C_over_x = 0.0;
    Region region = Region::quiescent;
};

class FlowField {
  public:
    explicit FlowField(const SolutionCase& sol);

    ProfileRatios ratios_at(double x) const;
    FlowSample sample(double t, double r) const;

    // t = 0 profiles: u, c, p, theta power laws in r
    struct CollapseRow {
        double r, u, c, p, theta, rho;
    };
    std::vector<CollapseRow> collapse_profile(const std::vector<double>& r_grid) const;

    double incoming_shock_radius(double t) const;  // r_i(t) = (-t)^(1/lambda), t < 0
    double outgoing_shock_radius(double t) const;  // r_o(t) = (t/B)^(1/lambda), t > 0

    const SolutionCase& solution() const { return *sol_; }

  private:
    const SolutionCase* sol_;
    std::vector<PieceInterpolant> interp_;
    double x_last_ = 0.0;
};

}  // namespace simflow
