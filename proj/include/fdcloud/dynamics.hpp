#pragma once

// Radial steady states as trajectories of the planar system in s = log r
//
//     x' = (2 - d) x + y
//     y' = 2 y - x e^{2s} R(e^{-2s} y)
//
// which is autonomous, y' = (2 - x) y, for the Maxwell-Boltzmann model.
// Trajectories are launched from the leading-order asymptotics at s -> -inf,
//
//     y ~ rho e^{2s},   x ~ (rho / d) e^{2s},
//
// so rho = lim y e^{-2s} is the central density. The radial variables are
// Q(e^s) = x e^{(d-2)s}, Q'(e^s) = y e^{(d-3)s} and the density is y e^{-2s}.

#include "fdcloud/models.hpp"
#include "fdcloud/numerics.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fdcloud {

struct State {
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct PhaseVelocity {
    double dx = 0.0;
    double dy = 0.0;
};

PhaseVelocity rhs_nonautonomous(const ModelSpec& model, double s, double x, double y,
                                const NumericsConfig& cfg = {});
PhaseVelocity rhs_autonomous(int d, double x, double y);

// Leading-order asymptotic data; requires rho > 0 and s_start <= -10.
State initial_state(int d, double rho, double s_start);

class Trajectory {
public:
    const ModelSpec& model() const noexcept { return model_; }
    // Central density, present when launched from asymptotic data.
    std::optional<double> rho() const noexcept { return rho_; }
    double s_begin() const noexcept { return solution_.t_begin(); }
    double s_end() const noexcept { return solution_.t_end(); }

    State at(double s) const;
    // The accepted integrator nodes, strictly increasing in s.
    std::vector<State> samples() const;
    std::vector<State> on_grid(std::span<const double> s_values) const;

    // Underlying dense solution in the components (x, log y).
    const OdeSolution& solution() const noexcept { return solution_; }

private:
    friend Trajectory integrate_from_state(const ModelSpec&, const State&, double,
                                           const NumericsConfig&);
    friend Trajectory integrate_trajectory(const ModelSpec&, double, double, double,
                                           const NumericsConfig&);

    Trajectory(ModelSpec model, std::optional<double> rho, OdeSolution solution)
        : model_(model), rho_(rho), solution_(std::move(solution)) {}

    ModelSpec model_;
    std::optional<double> rho_;
    OdeSolution solution_;
};

// Integrates from asymptotic data with central density rho on [s_start, s_end].
// The integrated components are x and log y. The absolute tolerance on x is
// taken relative to its initial size, so error control stays relative while
// x = O(e^{2 s_start}); the absolute tolerance on log y is ode_rel_tol.
// Throws PositivityError if a node leaves the open positive quadrant.
Trajectory integrate_trajectory(const ModelSpec& model, double rho, double s_start, double s_end,
                                const NumericsConfig& cfg = {});

// Integrates forward from an arbitrary phase point (s_end > start.s).
Trajectory integrate_from_state(const ModelSpec& model, const State& start, double s_end,
                                const NumericsConfig& cfg = {});

// L(x, y) = (x-2)^2/2 + y - 2(d-2) - 2(d-2) log(y / (2d-4)); y > 0.
double lyapunov(int d, double x, double y);

struct LyapunovReport {
    bool passed = false;
    // Largest increase of L between consecutive nodes (<= 0 when decaying).
    double max_increase = 0.0;
    // Largest relative gap between a centered difference of L and -(d-2)(x-2)^2,
    // over grid points with |x - 2| > 0.1.
    double max_rel_slope_error = 0.0;
    std::size_t slope_points = 0;
    std::vector<double> offending_s;
};

// Requires a Maxwell-Boltzmann trajectory; per-step tolerance 1e-9,
// slope tolerance 1e-3.
LyapunovReport lyapunov_decay_check(const Trajectory& traj);

struct RadialPoint {
    double r = 0.0;
    double q = 0.0;
    double q_prime = 0.0;
};

RadialPoint to_radial(const State& state, int d);
State from_radial(const RadialPoint& point, int d);

struct DensityPoint {
    double r = 0.0;
    double density = 0.0;
};

// Density y e^{-2s} at every trajectory node.
std::vector<DensityPoint> density_profile(const Trajectory& traj);

struct RadialEndpoint {
    double q = 0.0;
    double q_prime = 0.0;
};

// Integrates -Q'' + (d-1) Q'/r = Q R(r^{1-d} Q') in r from the series data
// Q(r0) = rho r0^d / d, Q'(r0) = rho r0^{d-1} up to r_end > r0 (default 1).
// Independent of the (s, x, y) formulation; Q(1) must match x(0).
RadialEndpoint radial_q_integrate(const ModelSpec& model, double rho, double r0 = 1e-6,
                                  const NumericsConfig& cfg = {}, double r_end = 1.0);

// Uniform grid of n points on [s_start, 0] used for every cross-trajectory sup.
std::vector<double> shared_grid(double s_start, std::size_t n = 2000);

} // namespace fdcloud
