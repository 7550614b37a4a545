#include "fdcloud/bifurcation.hpp"

#include "fdcloud/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace fdcloud {

namespace {

// e^{2s} S(e^{-2s} y) = y S(z) / z
double scaled_source(const ModelSpec& model, double s, double y, const NumericsConfig& cfg) {
    if (!model.is_fermi() || y == 0.0)
        return 0.0;
    const double z = std::exp(-2.0 * s) * y;
    return y * s_value(model, z, cfg) / z;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

double mass_of_density(const ModelSpec& model, double rho, const NumericsConfig& cfg) {
    const Trajectory traj = integrate_trajectory(model, rho, cfg.s_start, 0.0, cfg);
    return sigma_d(model.d()) * traj.at(0.0).x;
}

MassCurve mass_curve(const ModelSpec& model, double rho_min, double rho_max, int points_per_decade,
                     const NumericsConfig& cfg, unsigned threads) {
    if (!(rho_min > 0.0) || !(rho_max > rho_min) || !std::isfinite(rho_max))
        throw DomainError("mass_curve needs 0 < rho_min < rho_max");
    if (points_per_decade < 4)
        throw DomainError("mass_curve needs at least 4 points per decade");
    cfg.validate();

    const double decades = std::log10(rho_max / rho_min);
    const auto n = static_cast<std::size_t>(std::ceil(decades * points_per_decade - 1e-9)) + 1;
    const std::vector<double> grid = log_space(rho_min, rho_max, std::max<std::size_t>(n, 2));

    std::vector<double> mass(grid.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> errors(grid.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < grid.size(); i += stride) {
            try {
                mass[i] = mass_of_density(model, grid[i], cfg);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w, workers);
        for (auto& t : pool)
            t.join();
    }

    MassCurve curve;
    curve.model = model;
    curve.rho_min = rho_min;
    curve.rho_max = rho_max;
    curve.points_per_decade = points_per_decade;
    curve.grid_policy = "log-spaced, " + std::to_string(points_per_decade) + " points per decade, " +
                        std::to_string(grid.size()) + " points";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (errors[i].empty() && std::isfinite(mass[i]) && mass[i] > 0.0)
            curve.points.push_back({grid[i], mass[i]});
        else
            curve.failures.push_back({grid[i], errors[i].empty() ? "non-finite mass" : errors[i]});
    }
    return curve;
}

Multiplicity count_solutions(const MassCurve& curve, double m_target, const NumericsConfig& cfg) {
    if (curve.points.empty())
        throw DomainError("count_solutions needs a nonempty curve");
    if (!(m_target > 0.0))
        throw DomainError("target mass must be positive");

    Multiplicity out;
    const auto [lo_it, hi_it] = std::minmax_element(
        curve.points.begin(), curve.points.end(),
        [](const MassPoint& a, const MassPoint& b) { return a.mass < b.mass; });
    if (m_target < lo_it->mass || m_target > hi_it->mass) {
        out.diagnostic = "target mass " + format_double(m_target) + " outside curve mass range [" +
                         format_double(lo_it->mass) + ", " + format_double(hi_it->mass) + "]";
        return out;
    }

    auto residual = [&](double log_rho) {
        return mass_of_density(curve.model, std::exp(log_rho), cfg) - m_target;
    };
    const auto& pts = curve.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double gi = pts[i].mass - m_target;
        if (gi == 0.0) {
            out.roots.push_back(pts[i].rho);
            continue;
        }
        if (i + 1 == pts.size())
            break;
        const double gn = pts[i + 1].mass - m_target;
        if ((gi < 0.0 && gn > 0.0) || (gi > 0.0 && gn < 0.0)) {
            const double root =
                find_root_monotone(residual, std::log(pts[i].rho), std::log(pts[i + 1].rho), cfg);
            out.roots.push_back(std::exp(root));
        }
    }
    out.multiplicity = out.roots.size();
    return out;
}

std::optional<MassWindow> intermediate_mass_window(const MassCurve& curve) {
    const auto& p = curve.points;
    std::size_t i = 1;
    for (; i + 1 < p.size(); ++i) {
        if (p[i].mass > p[i - 1].mass && p[i].mass >= p[i + 1].mass)
            break;
    }
    if (i + 1 >= p.size())
        return std::nullopt;
    const double first_max = p[i].mass;
    for (std::size_t j = i + 1; j + 1 < p.size(); ++j) {
        if (p[j].mass < p[j - 1].mass && p[j].mass <= p[j + 1].mass)
            return MassWindow{first_max, p[j].mass};
    }
    return std::nullopt;
}

std::vector<ConvergenceReport> convergence_study(int d, ModelKind kind, double rho0,
                                                 const std::vector<double>& eta_list,
                                                 const NumericsConfig& cfg) {
    if (kind == ModelKind::MaxwellBoltzmann)
        throw DomainError("convergence_study compares a Fermi-Dirac kind against Maxwell-Boltzmann");
    if (!(rho0 > 0.0))
        throw DomainError("rho0 must be positive");
    for (std::size_t i = 0; i < eta_list.size(); ++i) {
        if (!(eta_list[i] > 0.0) || eta_list[i] > 1.0)
            throw DomainError("every eta must lie in (0, 1]");
        if (i > 0 && !(eta_list[i] < eta_list[i - 1]))
            throw DomainError("eta_list must be strictly decreasing");
    }

    const std::vector<double> grid = shared_grid(cfg.s_start);
    const Trajectory mb = integrate_trajectory(ModelSpec::maxwell_boltzmann(d), rho0, cfg.s_start, 0.0, cfg);
    const std::vector<State> mb_states = mb.on_grid(grid);

    std::vector<ConvergenceReport> reports;
    for (double eta : eta_list) {
        const Trajectory fd = integrate_trajectory(ModelSpec::make(kind, d, eta), rho0, cfg.s_start, 0.0, cfg);
        ConvergenceReport r;
        r.rho0 = rho0;
        r.eta = eta;
        double gap_x = 0.0, gap_y = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const State f = fd.at(grid[i]);
            const double dx = std::abs(f.x - mb_states[i].x);
            const double dy = std::abs(f.y - mb_states[i].y);
            const double weight = std::exp(-2.0 * grid[i]);
            r.a_eta = std::max(r.a_eta, weight * dx);
            r.b_eta = std::max(r.b_eta, weight * dy);
            gap_x = std::max(gap_x, dx);
            gap_y = std::max(gap_y, dy);
        }
        r.sup_uniform_gap = std::max(gap_x, gap_y);
        r.kappa_emp = 2.0 * r.b_eta * std::exp(-rho0 / d) / eta;
        reports.push_back(r);
    }
    return reports;
}

AprioriReport apriori_bound_audit(const ModelSpec& model, double rho0, double rho,
                                  const NumericsConfig& cfg) {
    if (!(rho > 0.0) || rho > rho0)
        throw DomainError("apriori_bound_audit needs 0 < rho <= rho0");
    AprioriReport report;
    const Trajectory traj = integrate_trajectory(model, rho, cfg.s_start, 0.0, cfg);
    const std::vector<double> grid = shared_grid(cfg.s_start);
    report.points = grid.size();
    if (!model.is_fermi()) {
        report.passed = true;
        return report;
    }

    double s_bar = s_value(model, rho0, cfg);
    for (double z : lin_space(0.0, rho0, 2001))
        s_bar = std::max(s_bar, s_value(model, z, cfg));
    report.s_bar = s_bar;

    const int d = model.d();
    report.max_relative_violation = -std::numeric_limits<double>::infinity();
    for (double s : grid) {
        const State st = traj.at(s);
        const double lhs = d * st.x * scaled_source(model, s, st.y, cfg);
        const double rhs = rho0 * std::exp(4.0 * s) * s_bar;
        report.max_lhs = std::max(report.max_lhs, lhs);
        double violation;
        if (rhs > 0.0)
            violation = (lhs - rhs) / rhs;
        else
            violation = lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        report.max_relative_violation = std::max(report.max_relative_violation, violation);
    }
    report.passed = report.max_relative_violation <= 1e-6;
    return report;
}

ResidualReport difference_residual_audit(int d, const Trajectory& fd_traj, const Trajectory& mb_traj,
                                         const NumericsConfig& cfg) {
    if (fd_traj.model().d() != d || mb_traj.model().d() != d)
        throw DomainError("trajectories do not share the dimension d");
    if (mb_traj.model().kind() != ModelKind::MaxwellBoltzmann)
        throw DomainError("reference trajectory must be Maxwell-Boltzmann");
    if (!fd_traj.rho() || !mb_traj.rho() || *fd_traj.rho() != *mb_traj.rho())
        throw DomainError("trajectories must share the central density");
    if (fd_traj.s_begin() != mb_traj.s_begin() || fd_traj.s_end() < 0.0 || mb_traj.s_end() < 0.0)
        throw DomainError("trajectories must share the grid [s_start, 0]");

    const ModelSpec& model = fd_traj.model();
    constexpr double h = 1e-3;
    constexpr double kFloor = 1e-10;
    constexpr double kTol = 1e-3;
    ResidualReport report;

    auto diff = [&](double s) {
        const State f = fd_traj.at(s);
        const State m = mb_traj.at(s);
        return std::pair{f.x - m.x, f.y - m.y};
    };

    for (double s : shared_grid(fd_traj.s_begin())) {
        if (s - h < fd_traj.s_begin() || s + h > 0.0)
            continue;
        const State f = fd_traj.at(s);
        const State m = mb_traj.at(s);
        const double w = f.x - m.x;
        const double v = f.y - m.y;
        const auto [w_hi, v_hi] = diff(s + h);
        const auto [w_lo, v_lo] = diff(s - h);
        const double dw = (w_hi - w_lo) / (2.0 * h);
        const double dv = (v_hi - v_lo) / (2.0 * h);

        const double source = f.x * scaled_source(model, s, f.y, cfg);
        report.max_source = std::max(report.max_source, std::abs(source));
        const double rhs_w = (2.0 - d) * w + v;
        const double rhs_v = (2.0 - m.x) * v - f.y * w + source;

        for (auto [lhs, rhs] : {std::pair{dw, rhs_w}, std::pair{dv, rhs_v}}) {
            const double mag = std::max(std::abs(lhs), std::abs(rhs));
            if (mag <= kFloor)
                continue;
            report.max_rel_residual = std::max(report.max_rel_residual, std::abs(lhs - rhs) / mag);
            ++report.points_checked;
        }
    }
    report.passed = report.max_rel_residual <= kTol;
    return report;
}

} // namespace fdcloud
