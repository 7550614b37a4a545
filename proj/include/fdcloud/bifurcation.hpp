#pragma once

// Shooting map rho -> M(rho) = sigma_d x(0), the mass-density curve, the
// multiplicity of steady states carrying a prescribed mass, and numerical
// audits of the eta -> 0 convergence of Fermi-Dirac trajectories to the
// Maxwell-Boltzmann ones.

#include "fdcloud/dynamics.hpp"
#include "fdcloud/models.hpp"
#include "fdcloud/numerics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fdcloud {

// sigma_d * x(0) for the trajectory with central density rho, launched at cfg.s_start.
double mass_of_density(const ModelSpec& model, double rho, const NumericsConfig& cfg = {});

struct MassPoint {
    double rho = 0.0;
    double mass = 0.0;
};

struct MassFailure {
    double rho = 0.0;
    std::string message;
};

struct MassCurve {
    ModelSpec model = ModelSpec::maxwell_boltzmann(3);
    double rho_min = 0.0;
    double rho_max = 0.0;
    int points_per_decade = 0;
    std::string grid_policy;
    // Successful points in increasing rho; failed grid points are listed separately.
    std::vector<MassPoint> points;
    std::vector<MassFailure> failures;
};

// Log-spaced scan with ceil(decades * points_per_decade) + 1 points. Points
// are independent and may be evaluated on `threads` workers (0 = hardware
// concurrency); assembly is always in rho order.
MassCurve mass_curve(const ModelSpec& model, double rho_min, double rho_max, int points_per_decade,
                     const NumericsConfig& cfg = {}, unsigned threads = 0);

struct Multiplicity {
    std::size_t multiplicity = 0;
    std::vector<double> roots;  // increasing rho
    std::string diagnostic;
};

// Counts sign changes of M - M_target along the curve and refines each by a
// bracketing solve in log rho on freshly integrated trajectories.
Multiplicity count_solutions(const MassCurve& curve, double m_target, const NumericsConfig& cfg = {});

struct MassWindow {
    double first_max = 0.0;
    double first_min = 0.0;
};

// Masses strictly between the first local maximum of the curve and the first
// local minimum after it; nullopt when the curve has no such pair.
std::optional<MassWindow> intermediate_mass_window(const MassCurve& curve);

struct ConvergenceReport {
    double rho0 = 0.0;
    double eta = 0.0;
    double a_eta = 0.0;            // sup e^{-2s} |x_eta - x_0| on the shared grid
    double b_eta = 0.0;            // sup e^{-2s} |y_eta - y_0|
    double kappa_emp = 0.0;        // 2 B_eta e^{-rho0/d} / eta
    double sup_uniform_gap = 0.0;  // max(sup |x_eta - x_0|, sup |y_eta - y_0|)
};

// eta_list strictly decreasing in (0, 1]; kind must be a Fermi-Dirac kind.
std::vector<ConvergenceReport> convergence_study(int d, ModelKind kind, double rho0,
                                                 const std::vector<double>& eta_list,
                                                 const NumericsConfig& cfg = {});

struct AprioriReport {
    double s_bar = 0.0;                  // max of S on [0, rho0]
    double max_lhs = 0.0;                // max of d x e^{2s} S(e^{-2s} y)
    double max_relative_violation = 0.0; // max (lhs - rhs) / rhs, <= 0 when the bound holds
    std::size_t points = 0;
    bool passed = false;
};

// d x e^{2s} S(e^{-2s} y) <= rho0 e^{4s} max_[0,rho0] S along the trajectory
// with central density rho <= rho0, on the shared grid over [s_start, 0].
AprioriReport apriori_bound_audit(const ModelSpec& model, double rho0, double rho,
                                  const NumericsConfig& cfg = {});

struct ResidualReport {
    double max_rel_residual = 0.0;
    // max |x_eta e^{2s} S(e^{-2s} y_eta)|, the source driving the difference.
    double max_source = 0.0;
    std::size_t points_checked = 0;
    bool passed = false;
};

// Checks that w = x_eta - x_0, v = y_eta - y_0 obey
//   w' = (2-d) w + v
//   v' = (2-x_0) v - y_eta w + x_eta e^{2s} S(e^{-2s} y_eta)
// by centered differences on the shared grid (relative 1e-3 wherever the
// magnitudes exceed 1e-10).
ResidualReport difference_residual_audit(int d, const Trajectory& fd_traj, const Trajectory& mb_traj,
                                         const NumericsConfig& cfg = {});

} // namespace fdcloud
