#include "fdcloud/io.hpp"

#include "fdcloud/errors.hpp"

#include <cmath>
#include <cstdio>

namespace fdcloud {

namespace {

struct TrajectoryRow {
    State state;
    RadialPoint radial;
    double density;
};

TrajectoryRow make_row(const State& st, int d) {
    return {st, to_radial(st, d), st.y > 0.0 ? std::exp(std::log(st.y) - 2.0 * st.s) : 0.0};
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json model_to_json(const ModelSpec& model) {
    return {{"kind", std::string(kind_name(model.kind()))}, {"d", model.d()}, {"eta", model.eta()}};
}

ModelSpec model_from_json(const nlohmann::json& j) {
    try {
        const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
        const int d = j.at("d").get<int>();
        const double eta = j.contains("eta") ? j.at("eta").get<double>() : 0.0;
        return ModelSpec::make(kind, d, eta);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed model JSON: ") + e.what());
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool lyapunov_column) {
    const int d = traj.model().d();
    os << "s,x,y,r,Q,Qprime,density" << (lyapunov_column ? ",lyapunov" : "") << '\n';
    for (const State& st : traj.samples()) {
        const TrajectoryRow row = make_row(st, d);
        os << format_g17(st.s) << ',' << format_g17(st.x) << ',' << format_g17(st.y) << ','
           << format_g17(row.radial.r) << ',' << format_g17(row.radial.q) << ','
           << format_g17(row.radial.q_prime) << ',' << format_g17(row.density);
        if (lyapunov_column)
            os << ',' << format_g17(lyapunov(d, st.x, st.y));
        os << '\n';
    }
}

nlohmann::json trajectory_json(const Trajectory& traj, bool lyapunov_column) {
    const int d = traj.model().d();
    nlohmann::json samples = nlohmann::json::array();
    for (const State& st : traj.samples()) {
        const TrajectoryRow row = make_row(st, d);
        nlohmann::json j = {{"s", st.s},          {"x", st.x},
                            {"y", st.y},          {"r", row.radial.r},
                            {"Q", row.radial.q},  {"Qprime", row.radial.q_prime},
                            {"density", row.density}};
        if (lyapunov_column)
            j["lyapunov"] = lyapunov(d, st.x, st.y);
        samples.push_back(std::move(j));
    }
    nlohmann::json out = {{"model", model_to_json(traj.model())}, {"samples", std::move(samples)}};
    if (traj.rho())
        out["rho"] = *traj.rho();
    return out;
}

void write_mass_curve_csv(std::ostream& os, const MassCurve& curve) {
    os << "rho,mass\n";
    for (const MassPoint& p : curve.points)
        os << format_g17(p.rho) << ',' << format_g17(p.mass) << '\n';
}

nlohmann::json mass_curve_json(const MassCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const MassPoint& p : curve.points)
        points.push_back({{"rho", p.rho}, {"mass", p.mass}});
    nlohmann::json failures = nlohmann::json::array();
    for (const MassFailure& f : curve.failures)
        failures.push_back({{"rho", f.rho}, {"message", f.message}});
    return {{"model", model_to_json(curve.model)},
            {"grid",
             {{"rho_min", curve.rho_min},
              {"rho_max", curve.rho_max},
              {"points_per_decade", curve.points_per_decade},
              {"policy", curve.grid_policy}}},
            {"points", std::move(points)},
            {"failures", std::move(failures)}};
}

nlohmann::json convergence_json(const std::vector<ConvergenceReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const ConvergenceReport& r : reports) {
        out.push_back({{"rho0", r.rho0},
                       {"eta", r.eta},
                       {"A_eta", r.a_eta},
                       {"B_eta", r.b_eta},
                       {"kappa_emp", r.kappa_emp},
                       {"sup_uniform_gap", r.sup_uniform_gap}});
    }
    return out;
}

} // namespace fdcloud
