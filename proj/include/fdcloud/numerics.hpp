#pragma once

// Deterministic numerical kernels shared by the whole library: adaptive
// Gauss-Kronrod quadrature on finite and semi-infinite ranges, a bracketing
// root finder for monotone scalar functions, golden-section maximization and
// an adaptive Dormand-Prince 5(4) integrator with continuous (dense) output.
//
// All entry points are pure functions of their arguments; there is no hidden
// state and no internal parallelism.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fdcloud {

struct NumericsConfig {
    double quad_rel_tol = 1e-10;
    double quad_split_margin = 30.0;
    double root_tol = 1e-12;
    double ode_rel_tol = 1e-10;
    double ode_abs_tol = 1e-14;
    long max_steps = 1'000'000;
    // Log-radius at which trajectories are started from asymptotic data.
    double s_start = -20.0;

    // Throws ConfigError when an invariant is violated.
    void validate() const;
};

using ScalarFn = std::function<double(double)>;
using VectorField = std::function<void(double t, std::span<const double> u, std::span<double> du)>;

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
};

// Integral of f over [a, b] (a < b) by globally adaptive G7/K15 subdivision.
QuadResult integrate_interval(const ScalarFn& f, double a, double b, const NumericsConfig& cfg);

// Integral of f over [0, inf). The finite part [0, max(split_point, 0)] is
// integrated adaptively; the tail is covered by doubling panels until a panel
// contributes less than a tenth of the requested relative tolerance.
QuadResult integrate_semi_infinite(const ScalarFn& f, double split_point, const NumericsConfig& cfg);

// Root of a monotone continuous g. The bracket [lo, hi] is widened (at most
// 100 times) if it does not contain a sign change; the result z is the
// Brent iterate once the enclosing bracket is narrower than
// root_tol * max(1, |z|).
double find_root_monotone(const ScalarFn& g, double lo, double hi, const NumericsConfig& cfg);

struct MaxResult {
    double arg = 0.0;
    double value = 0.0;
};

// Golden-section search for the maximum of a unimodal f on [a, b].
MaxResult maximize_golden(const ScalarFn& f, double a, double b, double x_tol);

// n log-spaced values from lo to hi inclusive (n >= 2).
std::vector<double> log_space(double lo, double hi, std::size_t n);

// n uniformly spaced values from lo to hi inclusive (n >= 2).
std::vector<double> lin_space(double lo, double hi, std::size_t n);

// Dense solution of an initial value problem. Nodes are the accepted steps;
// between nodes the fourth-order Dormand-Prince interpolant is used.
class OdeSolution {
public:
    OdeSolution() = default;

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t node_count() const noexcept { return times_.size(); }
    double t_begin() const noexcept { return times_.front(); }
    double t_end() const noexcept { return times_.back(); }

    const std::vector<double>& node_times() const noexcept { return times_; }
    std::span<const double> node_state(std::size_t i) const;

    // Dense evaluation at t inside [t_begin, t_end] (either orientation).
    void evaluate(double t, std::span<double> out) const;
    std::vector<double> evaluate(double t) const;

private:
    friend OdeSolution ode_integrate(const VectorField&, double, std::vector<double>, double,
                                     const NumericsConfig&, std::vector<double>);

    std::size_t locate(double t) const;

    std::size_t dim_ = 0;
    std::vector<double> times_;
    std::vector<double> states_;  // node_count * dim
    std::vector<double> dense_;   // (node_count - 1) * 4 * dim
};

// Adaptive explicit Runge-Kutta (Dormand-Prince 5(4)) from (t0, u0) to t1.
// Local error per component is kept below atol_i + ode_rel_tol * |u_i|, where
// atol_i = abs_tol[i] when abs_tol is given and ode_abs_tol otherwise.
// A stage producing non-finite derivatives rejects the step and shrinks it.
// Throws StepLimitError after max_steps accepted+rejected steps and
// BlowUpError when an accepted state exceeds 1e300 in magnitude.
OdeSolution ode_integrate(const VectorField& field, double t0, std::vector<double> u0, double t1,
                          const NumericsConfig& cfg, std::vector<double> abs_tol = {});

} // namespace fdcloud
