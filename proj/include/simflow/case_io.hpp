#pragma once

#include <iosfwd>
#include <string>

#include "simflow/continuation.hpp"
#include "simflow/weak_verify.hpp"

// Versioned JSON case files and CSV writers. Doubles round-trip exactly
// (shortest-representation printing), so deserialize(serialize(x)) == x.

namespace simflow {

inline constexpr const char* kCaseSchema = "simflow-case/1";

std::string case_to_json(const SolutionCase& sol);
SolutionCase case_from_json(const std::string& text);

void save_case(const SolutionCase& sol, const std::string& path);
SolutionCase load_case(const std::string& path);

std::string shoot_result_to_json(const GasConfig& cfg, const ShootResult& sr);
std::string verify_report_to_json(const VerifyReport& rep);
std::string verify_report_summary(const VerifyReport& rep);

// columns: x, V, C, R, piece, event
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

// columns: t, r, rho, u, c, p, region
void write_fields_csv(const FlowField& ff, const std::vector<double>& ts,
                      const std::vector<double>& rs, std::ostream& os);

}  // namespace simflow
