#pragma once

// Flat-file artifacts: CSV with 17 significant digits and JSON documents.

#include "fdcloud/bifurcation.hpp"
#include "fdcloud/dynamics.hpp"
#include "fdcloud/models.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace fdcloud {

// printf "%.17g", round-trip exact for doubles.
std::string format_g17(double v);

nlohmann::json model_to_json(const ModelSpec& model);
// Accepts {"kind": "mb"|"sfd"|"ffd", "d": int, "eta": number}; eta defaults to 0.
ModelSpec model_from_json(const nlohmann::json& j);

// Header s,x,y,r,Q,Qprime,density[,lyapunov]; one row per integrator node.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool lyapunov_column);
nlohmann::json trajectory_json(const Trajectory& traj, bool lyapunov_column);

// Header rho,mass; failed grid points are omitted.
void write_mass_curve_csv(std::ostream& os, const MassCurve& curve);
nlohmann::json mass_curve_json(const MassCurve& curve);

nlohmann::json convergence_json(const std::vector<ConvergenceReport>& reports);

} // namespace fdcloud
