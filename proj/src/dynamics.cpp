#include "fdcloud/dynamics.hpp"

#include "fdcloud/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fdcloud {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxExp = 700.0;

// z = e^{-2s} y; log-space below s = -300. NaN when y < 0 or out of range.
double density_argument(double s, double y) {
    if (!(y >= 0.0))
        return kNaN;
    if (y == 0.0)
        return 0.0;
    if (s < -300.0) {
        const double log_z = std::log(y) - 2.0 * s;
        return log_z > kMaxExp ? kNaN : std::exp(log_z);
    }
    const double z = std::exp(-2.0 * s) * y;
    return std::isfinite(z) ? z : kNaN;
}

// Right-hand side in the (x, y) variables; NaN when e^{-2s} y is not representable.
PhaseVelocity field_value(const ModelSpec& model, double s, double x, double y,
                          const NumericsConfig& cfg) {
    const double d = model.d();
    PhaseVelocity v;
    v.dx = (2.0 - d) * x + y;
    if (model.kind() == ModelKind::MaxwellBoltzmann) {
        v.dy = (2.0 - x) * y;
        return v;
    }
    const double z = density_argument(s, y);
    if (std::isnan(z)) {
        v.dy = kNaN;
        return v;
    }
    // e^{2s} R(e^{-2s} y) = y * R(z)/z
    v.dy = 2.0 * y - x * y * r_over_z(model, z, cfg);
    return v;
}

// Integrated state is (x, log y), so y > 0 holds by construction and the
// -x y term that makes y' stiff inside a degenerate core drops out of the
// Jacobian. Invalid trial stages produce NaN, which makes the stepper reject
// and shrink the step.
PhaseVelocity log_field_value(const ModelSpec& model, double s, double x, double log_y,
                              const NumericsConfig& cfg) {
    const double d = model.d();
    PhaseVelocity v;
    v.dx = (2.0 - d) * x + std::exp(log_y);
    if (model.kind() == ModelKind::MaxwellBoltzmann) {
        v.dy = 2.0 - x;
        return v;
    }
    const double log_z = log_y - 2.0 * s;
    if (!(log_z <= kMaxExp)) {
        v.dy = kNaN;
        return v;
    }
    v.dy = 2.0 - x * r_over_z(model, std::exp(log_z), cfg);
    return v;
}

OdeSolution integrate_log_state(const ModelSpec& model, const State& start, double s_end,
                                const NumericsConfig& cfg) {
    if (!(start.x > 0.0) || !(start.y > 0.0))
        throw DomainError("trajectories start in the open positive quadrant");
    auto field = [&](double s, std::span<const double> u, std::span<double> du) {
        const PhaseVelocity v = log_field_value(model, s, u[0], u[1], cfg);
        du[0] = v.dx;
        du[1] = v.dy;
    };
    // Relative control on x while it is O(e^{2 s_start}).
    std::vector<double> abs_tol{cfg.ode_abs_tol, cfg.ode_rel_tol};
    if (start.x < 1.0)
        abs_tol[0] = std::max(cfg.ode_abs_tol * start.x, std::numeric_limits<double>::min());
    return ode_integrate(field, start.s, {start.x, std::log(start.y)}, s_end, cfg, std::move(abs_tol));
}

void check_positivity(const OdeSolution& sol) {
    std::vector<double> bad;
    for (std::size_t i = 0; i < sol.node_count(); ++i) {
        const auto u = sol.node_state(i);
        // y = e^{u[1]} is positive whenever u[1] is finite, even where e^{u[1]} underflows.
        if (!(u[0] > 0.0) || !std::isfinite(u[1]))
            bad.push_back(sol.node_times()[i]);
    }
    if (!bad.empty()) {
        const std::string message =
            "trajectory left the positive quadrant (first at s = " + std::to_string(bad.front()) + ")";
        throw PositivityError(message, std::move(bad));
    }
}

State to_state(double s, std::span<const double> u) {
    return {s, u[0], std::exp(u[1])};
}

} // namespace

PhaseVelocity rhs_autonomous(int d, double x, double y) {
    return {(2.0 - d) * x + y, (2.0 - x) * y};
}

PhaseVelocity rhs_nonautonomous(const ModelSpec& model, double s, double x, double y,
                                const NumericsConfig& cfg) {
    if (!(y >= 0.0))
        throw DomainError("rhs_nonautonomous requires y >= 0");
    if (model.kind() != ModelKind::MaxwellBoltzmann && std::isnan(density_argument(s, y)))
        throw EvaluationError("e^{-2s} y is not representable at s = " + std::to_string(s), s);
    return field_value(model, s, x, y, cfg);
}

State initial_state(int d, double rho, double s_start) {
    if (d < 3 || d > 9)
        throw DomainError("dimension outside 3..9");
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw DomainError("central density rho must be positive");
    if (!(s_start <= -10.0))
        throw ConfigError("s_start must be <= -10 for the asymptotic initial data");
    const double y = rho * std::exp(2.0 * s_start);
    if (!(y > 0.0))
        throw DomainError("initial state underflows at s_start = " + std::to_string(s_start));
    return {s_start, y / d, y};
}

State Trajectory::at(double s) const {
    double u[2];
    solution_.evaluate(s, u);
    return to_state(s, u);
}

std::vector<State> Trajectory::samples() const {
    std::vector<State> out;
    out.reserve(solution_.node_count());
    for (std::size_t i = 0; i < solution_.node_count(); ++i)
        out.push_back(to_state(solution_.node_times()[i], solution_.node_state(i)));
    return out;
}

std::vector<State> Trajectory::on_grid(std::span<const double> s_values) const {
    std::vector<State> out;
    out.reserve(s_values.size());
    for (double s : s_values)
        out.push_back(at(s));
    return out;
}

Trajectory integrate_from_state(const ModelSpec& model, const State& start, double s_end,
                                const NumericsConfig& cfg) {
    if (!(s_end > start.s))
        throw DomainError("integrate_from_state requires s_end > s");
    cfg.validate();
    OdeSolution sol = integrate_log_state(model, start, s_end, cfg);
    check_positivity(sol);
    return Trajectory(model, std::nullopt, std::move(sol));
}

Trajectory integrate_trajectory(const ModelSpec& model, double rho, double s_start, double s_end,
                                const NumericsConfig& cfg) {
    if (!(s_start < s_end))
        throw DomainError("integrate_trajectory requires s_start < s_end");
    cfg.validate();
    const State start = initial_state(model.d(), rho, s_start);
    OdeSolution sol = integrate_log_state(model, start, s_end, cfg);
    check_positivity(sol);
    return Trajectory(model, rho, std::move(sol));
}

double lyapunov(int d, double x, double y) {
    if (!(y > 0.0))
        throw DomainError("Lyapunov function requires y > 0");
    const double c = 2.0 * (d - 2);
    const double dx = x - 2.0;
    return 0.5 * dx * dx + y - c - c * std::log(y / c);
}

LyapunovReport lyapunov_decay_check(const Trajectory& traj) {
    if (traj.model().kind() != ModelKind::MaxwellBoltzmann)
        throw DomainError("Lyapunov decay holds for the autonomous (Maxwell-Boltzmann) system only");
    const int d = traj.model().d();
    constexpr double kStepTol = 1e-9;
    constexpr double kSlopeTol = 1e-3;

    LyapunovReport report;
    const std::vector<State> nodes = traj.samples();
    double prev = lyapunov(d, nodes.front().x, nodes.front().y);
    report.max_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double cur = lyapunov(d, nodes[i].x, nodes[i].y);
        const double inc = cur - prev;
        report.max_increase = std::max(report.max_increase, inc);
        if (inc > kStepTol)
            report.offending_s.push_back(nodes[i].s);
        prev = cur;
    }
    if (nodes.size() == 1)
        report.max_increase = 0.0;

    // Centered differences of L along the dense solution.
    const double h = 1e-3;
    const double a = traj.s_begin() + h;
    const double b = traj.s_end() - h;
    if (b > a) {
        const auto n = static_cast<std::size_t>(std::ceil((b - a) / 0.01)) + 1;
        for (double s : lin_space(a, b, std::max<std::size_t>(n, 2))) {
            const State mid = traj.at(s);
            if (std::abs(mid.x - 2.0) <= 0.1)
                continue;
            const State lo = traj.at(s - h);
            const State hi = traj.at(s + h);
            const double slope = (lyapunov(d, hi.x, hi.y) - lyapunov(d, lo.x, lo.y)) / (2.0 * h);
            const double exact = -(d - 2) * (mid.x - 2.0) * (mid.x - 2.0);
            const double rel = std::abs(slope - exact) / std::abs(exact);
            report.max_rel_slope_error = std::max(report.max_rel_slope_error, rel);
            ++report.slope_points;
            if (rel > kSlopeTol)
                report.offending_s.push_back(s);
        }
    }
    report.passed = report.offending_s.empty();
    return report;
}

RadialPoint to_radial(const State& state, int d) {
    const double e1 = (d - 2) * state.s;
    const double e2 = (d - 3) * state.s;
    if (std::abs(state.s) > kMaxExp || std::abs(e1) > kMaxExp || std::abs(e2) > kMaxExp)
        throw EvaluationError("radial variables overflow at s = " + std::to_string(state.s), state.s);
    return {std::exp(state.s), state.x * std::exp(e1), state.y * std::exp(e2)};
}

State from_radial(const RadialPoint& point, int d) {
    if (!(point.r > 0.0))
        throw DomainError("from_radial requires r > 0");
    const double s = std::log(point.r);
    return {s, point.q * std::exp(-(d - 2) * s), point.q_prime * std::exp(-(d - 3) * s)};
}

std::vector<DensityPoint> density_profile(const Trajectory& traj) {
    std::vector<DensityPoint> out;
    for (const State& st : traj.samples())
        out.push_back({std::exp(st.s), st.y > 0.0 ? std::exp(std::log(st.y) - 2.0 * st.s) : 0.0});
    return out;
}

RadialEndpoint radial_q_integrate(const ModelSpec& model, double rho, double r0,
                                  const NumericsConfig& cfg, double r_end) {
    if (!(r0 > 0.0) || r0 > 1e-4)
        throw DomainError("radial_q_integrate requires 0 < r0 <= 1e-4");
    if (!(r_end > r0) || !std::isfinite(r_end))
        throw DomainError("radial_q_integrate requires r_end > r0");
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw DomainError("central density rho must be positive");
    cfg.validate();
    const int d = model.d();
    const double q0 = rho / d * std::pow(r0, d);
    const double qp0 = rho * std::pow(r0, d - 1);

    auto field = [&](double r, std::span<const double> u, std::span<double> du) {
        const double q = u[0];
        const double qp = u[1];
        du[0] = qp;
        const double density = std::pow(r, 1 - d) * qp;
        if (!(density >= 0.0) || !std::isfinite(density)) {
            du[1] = kNaN;
            return;
        }
        // Q R(density) = Q density (R/z)
        du[1] = (d - 1) * qp / r - q * density * r_over_z(model, density, cfg);
    };
    const OdeSolution sol = ode_integrate(field, r0, {q0, qp0}, r_end, cfg,
                                          {cfg.ode_abs_tol * q0, cfg.ode_abs_tol * qp0});
    const auto end = sol.node_state(sol.node_count() - 1);
    return {end[0], end[1]};
}

std::vector<double> shared_grid(double s_start, std::size_t n) {
    if (!(s_start < 0.0))
        throw DomainError("shared grid needs s_start < 0");
    return lin_space(s_start, 0.0, n);
}

} // namespace fdcloud
