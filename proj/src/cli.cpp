#include "fdcloud/cli.hpp"

#include "fdcloud/bifurcation.hpp"
#include "fdcloud/dynamics.hpp"
#include "fdcloud/errors.hpp"
#include "fdcloud/io.hpp"
#include "fdcloud/models.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fdcloud {

namespace {

struct SettingInfo {
    const char* key;
    const char* help;
};

constexpr SettingInfo kSettings[] = {
    {"kind", "model: mb, sfd or ffd"},
    {"d", "dimension, 3..9"},
    {"eta", "Fermi-Dirac parameter (default 1e-3 for sfd/ffd)"},
    {"rho", "central density (phase, crosscheck) or rho0 (converge)"},
    {"rho-min", "lower end of the density scan"},
    {"rho-max", "upper end of the density scan"},
    {"points-per-decade", "density scan resolution"},
    {"mass", "target mass (multiplicity default: 2 sigma_d)"},
    {"s-start", "log-radius of the asymptotic initial data (<= -10)"},
    {"s-end", "phase: final log-radius (default s-start + 50)"},
    {"etas", "converge: comma-separated, strictly decreasing eta ladder"},
    {"format", "csv or json"},
    {"out", "output path (default: standard output)"},
    {"threads", "workers for the density scan (0: hardware concurrency)"},
    {"quad-rel-tol", "quadrature relative tolerance"},
    {"quad-split-margin", "Fermi quadrature split margin"},
    {"root-tol", "root finder tolerance"},
    {"ode-rel-tol", "ODE relative tolerance"},
    {"ode-abs-tol", "ODE absolute tolerance"},
    {"max-steps", "ODE step budget"},
};

bool known_setting(const std::string& key) {
    return std::any_of(std::begin(kSettings), std::end(kSettings),
                       [&](const SettingInfo& s) { return key == s.key; });
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size() || !std::isfinite(v))
        throw ConfigError("setting '" + key + "' expects a finite number, got '" + text + "'");
    return v;
}

long parse_long(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size())
        throw ConfigError("setting '" + key + "' expects an integer, got '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, item));
    if (out.empty())
        throw ConfigError("setting '" + key + "' expects a comma-separated list of numbers");
    return out;
}

std::string json_scalar_to_text(const std::string& key, const nlohmann::json& v) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number())
        return format_g17(v.get<double>());
    throw ConfigError("setting '" + key + "' has an unsupported JSON type");
}

std::string default_format(const std::string& command) {
    return command == "mass-curve" || command == "phase" ? "csv" : "json";
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (cfg.out.empty()) {
        out << content;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file)
        throw ConfigError("cannot open output path '" + cfg.out + "'");
    file << content;
    if (!file)
        throw ConfigError("failed writing output path '" + cfg.out + "'");
}

std::string with_config(nlohmann::json doc, const RunConfig& cfg) {
    doc["config"] = config_to_json(cfg);
    return doc.dump(2) + "\n";
}

ModelSpec model_of(const RunConfig& cfg) {
    return ModelSpec::make(parse_model_kind(cfg.kind), cfg.d, cfg.eta);
}

std::size_t grid_crossings(const MassCurve& curve, double target) {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const double a = curve.points[i].mass - target;
        const double b = curve.points[i + 1].mass - target;
        if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0))
            ++n;
    }
    return n;
}

void report_failures(const MassCurve& curve, std::ostream& err) {
    for (const MassFailure& f : curve.failures)
        err << "warning: no mass at rho = " << format_g17(f.rho) << ": " << f.message << '\n';
}

void cmd_mass_curve(const RunConfig& cfg, std::ostream& out, std::ostream& log, std::ostream& err) {
    const MassCurve curve =
        mass_curve(model_of(cfg), cfg.rho_min, cfg.rho_max, cfg.points_per_decade, cfg.numerics, cfg.threads);
    report_failures(curve, err);
    if (curve.points.empty())
        throw NumericalError("every point of the density scan failed");

    std::ostringstream content;
    if (cfg.format == "csv")
        write_mass_curve_csv(content, curve);
    else
        content << with_config(mass_curve_json(curve), cfg);
    emit(cfg, content.str(), out);

    const auto [lo, hi] = std::minmax_element(
        curve.points.begin(), curve.points.end(),
        [](const MassPoint& a, const MassPoint& b) { return a.mass < b.mass; });
    log << "points " << curve.points.size() << ", failures " << curve.failures.size() << ", mass range ["
        << format_g17(lo->mass) << ", " << format_g17(hi->mass) << "]\n";
    if (cfg.mass > 0.0)
        log << "grid crossings of M = " << format_g17(cfg.mass) << ": " << grid_crossings(curve, cfg.mass) << '\n';
}

void cmd_phase(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    const ModelSpec model = model_of(cfg);
    const Trajectory traj = integrate_trajectory(model, cfg.rho, cfg.numerics.s_start, cfg.s_end, cfg.numerics);
    const bool lyap = model.kind() == ModelKind::MaxwellBoltzmann;
    std::ostringstream content;
    if (cfg.format == "csv")
        write_trajectory_csv(content, traj, lyap);
    else
        content << with_config(trajectory_json(traj, lyap), cfg);
    emit(cfg, content.str(), out);

    const State last = traj.at(traj.s_end());
    log << "samples " << traj.samples().size() << ", final state s = " << format_g17(last.s)
        << ", x = " << format_g17(last.x) << ", y = " << format_g17(last.y) << '\n';
}

void cmd_multiplicity(const RunConfig& cfg, std::ostream& out, std::ostream& log, std::ostream& err) {
    const ModelSpec model = model_of(cfg);
    const MassCurve curve =
        mass_curve(model, cfg.rho_min, cfg.rho_max, cfg.points_per_decade, cfg.numerics, cfg.threads);
    report_failures(curve, err);
    if (curve.points.empty())
        throw NumericalError("every point of the density scan failed");
    const Multiplicity m = count_solutions(curve, cfg.mass, cfg.numerics);

    nlohmann::json doc = {{"model", model_to_json(model)},
                          {"M_target", cfg.mass},
                          {"multiplicity", m.multiplicity},
                          {"roots", m.roots},
                          {"diagnostic", m.diagnostic},
                          {"scan_failures", curve.failures.size()}};
    emit(cfg, with_config(std::move(doc), cfg), out);
    log << "M_target " << format_g17(cfg.mass) << ": multiplicity " << m.multiplicity << '\n';
    if (!m.diagnostic.empty())
        log << m.diagnostic << '\n';
}

void cmd_converge(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    const std::vector<ConvergenceReport> reports =
        convergence_study(cfg.d, parse_model_kind(cfg.kind), cfg.rho, cfg.etas, cfg.numerics);
    nlohmann::json doc = {{"model", model_to_json(model_of(cfg))}, {"reports", convergence_json(reports)}};
    emit(cfg, with_config(std::move(doc), cfg), out);
    for (const ConvergenceReport& r : reports)
        log << "eta " << format_g17(r.eta) << ": B_eta " << format_g17(r.b_eta) << ", sup gap "
            << format_g17(r.sup_uniform_gap) << '\n';
}

void cmd_crosscheck(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    const ModelSpec model = model_of(cfg);
    const double x0 = integrate_trajectory(model, cfg.rho, cfg.numerics.s_start, 0.0, cfg.numerics).at(0.0).x;
    const double q1 = radial_q_integrate(model, cfg.rho, 1e-6, cfg.numerics).q;
    const double rel = std::abs(q1 - x0) / std::abs(x0);
    nlohmann::json doc = {{"model", model_to_json(model)}, {"x0", x0}, {"Q1", q1}, {"rel_diff", rel}};
    emit(cfg, with_config(std::move(doc), cfg), out);
    log << "x(0) " << format_g17(x0) << ", Q(1) " << format_g17(q1) << ", relative difference "
        << format_g17(rel) << '\n';
}

} // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::map<std::string, std::string> raw;

    const std::string head = trim(text);
    if (!head.empty() && head.front() == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
        }
        const nlohmann::json& obj = doc.contains("config") ? doc.at("config") : doc;
        if (!obj.is_object())
            throw ConfigError("config file '" + path + "' must hold a JSON object");
        for (const auto& [key, value] : obj.items()) {
            if (value.is_null())
                continue;
            if (value.is_array()) {
                std::string joined;
                for (const auto& item : value) {
                    if (!joined.empty())
                        joined += ',';
                    joined += json_scalar_to_text(key, item);
                }
                raw[key] = joined;
            } else {
                raw[key] = json_scalar_to_text(key, value);
            }
        }
        return raw;
    }

    std::istringstream lines(text);
    std::string line;
    int number = 0;
    while (std::getline(lines, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path + "' line " + std::to_string(number) +
                              ": expected key=value");
        raw[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return raw;
}

RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& raw) {
    for (const auto& [key, value] : raw) {
        if (!known_setting(key))
            throw ConfigError("unknown setting '" + key + "'");
    }
    auto get = [&](const char* key) -> const std::string* {
        const auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };

    RunConfig cfg;
    if (command == "converge")
        cfg.kind = "sfd";
    if (auto v = get("kind"))
        cfg.kind = trim(*v);
    const ModelKind kind = parse_model_kind(cfg.kind);
    if (auto v = get("d")) {
        const long d = parse_long("d", *v);
        if (d < 3 || d > 9)
            throw ConfigError("dimension d = " + trim(*v) + " outside the supported range 3..9");
        cfg.d = static_cast<int>(d);
    }
    cfg.eta = kind == ModelKind::MaxwellBoltzmann ? 0.0 : 1e-3;
    if (auto v = get("eta"))
        cfg.eta = parse_double("eta", *v);
    if (auto v = get("rho"))
        cfg.rho = parse_double("rho", *v);
    if (auto v = get("rho-min"))
        cfg.rho_min = parse_double("rho-min", *v);
    if (auto v = get("rho-max"))
        cfg.rho_max = parse_double("rho-max", *v);
    if (auto v = get("points-per-decade"))
        cfg.points_per_decade = static_cast<int>(parse_long("points-per-decade", *v));
    if (auto v = get("mass"))
        cfg.mass = parse_double("mass", *v);
    if (auto v = get("s-start"))
        cfg.numerics.s_start = parse_double("s-start", *v);
    cfg.s_end = cfg.numerics.s_start + 50.0;
    if (auto v = get("s-end"))
        cfg.s_end = parse_double("s-end", *v);
    if (auto v = get("etas"))
        cfg.etas = parse_list("etas", *v);
    cfg.format = default_format(command);
    if (auto v = get("format"))
        cfg.format = trim(*v);
    if (auto v = get("out"))
        cfg.out = *v;
    if (auto v = get("threads")) {
        const long t = parse_long("threads", *v);
        if (t < 0 || t > 1024)
            throw ConfigError("threads must lie in 0..1024");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (auto v = get("quad-rel-tol"))
        cfg.numerics.quad_rel_tol = parse_double("quad-rel-tol", *v);
    if (auto v = get("quad-split-margin"))
        cfg.numerics.quad_split_margin = parse_double("quad-split-margin", *v);
    if (auto v = get("root-tol"))
        cfg.numerics.root_tol = parse_double("root-tol", *v);
    if (auto v = get("ode-rel-tol"))
        cfg.numerics.ode_rel_tol = parse_double("ode-rel-tol", *v);
    if (auto v = get("ode-abs-tol"))
        cfg.numerics.ode_abs_tol = parse_double("ode-abs-tol", *v);
    if (auto v = get("max-steps"))
        cfg.numerics.max_steps = parse_long("max-steps", *v);

    // Validation before any computation.
    const ModelSpec model = model_of(cfg);
    cfg.numerics.validate();
    if (!(cfg.rho > 0.0))
        throw ConfigError("rho must be positive");
    if (!(cfg.rho_min > 0.0) || !(cfg.rho_max > cfg.rho_min))
        throw ConfigError("density scan needs 0 < rho-min < rho-max");
    if (cfg.points_per_decade < 4)
        throw ConfigError("points-per-decade must be at least 4");
    if (cfg.mass < 0.0)
        throw ConfigError("mass must be positive");
    if (!(cfg.s_end > cfg.numerics.s_start))
        throw ConfigError("s-end must exceed s-start");
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("format must be csv or json");
    if (cfg.format == "csv" && default_format(command) == "json")
        throw ConfigError(command + " writes JSON only");
    if (command == "multiplicity" && cfg.mass == 0.0)
        cfg.mass = 2.0 * sigma_d(cfg.d);
    if (command == "converge") {
        if (!model.is_fermi())
            throw ConfigError("converge needs a Fermi-Dirac kind (sfd or ffd)");
        for (std::size_t i = 0; i < cfg.etas.size(); ++i) {
            if (!(cfg.etas[i] > 0.0) || cfg.etas[i] > 1.0)
                throw ConfigError("every entry of etas must lie in (0, 1]");
            if (i > 0 && !(cfg.etas[i] < cfg.etas[i - 1]))
                throw ConfigError("etas must be strictly decreasing");
        }
    }
    return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    return {{"kind", cfg.kind},
            {"d", cfg.d},
            {"eta", cfg.eta},
            {"rho", cfg.rho},
            {"rho-min", cfg.rho_min},
            {"rho-max", cfg.rho_max},
            {"points-per-decade", cfg.points_per_decade},
            {"mass", cfg.mass},
            {"s-start", cfg.numerics.s_start},
            {"s-end", cfg.s_end},
            {"etas", cfg.etas},
            {"format", cfg.format},
            {"out", cfg.out},
            {"threads", cfg.threads},
            {"quad-rel-tol", cfg.numerics.quad_rel_tol},
            {"quad-split-margin", cfg.numerics.quad_split_margin},
            {"root-tol", cfg.numerics.root_tol},
            {"ode-rel-tol", cfg.numerics.ode_rel_tol},
            {"ode-abs-tol", cfg.numerics.ode_abs_tol},
            {"max-steps", cfg.numerics.max_steps}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady states of self-gravitating Fermi-Dirac and Maxwell-Boltzmann clouds", "fdcloud"};
    app.require_subcommand(1, 1);

    std::map<std::string, std::string> flags;
    std::string config_path;
    const std::pair<const char*, const char*> commands[] = {
        {"mass-curve", "scan the mass-density curve"},
        {"phase", "integrate one trajectory and export the phase portrait"},
        {"multiplicity", "count central densities carrying a given mass"},
        {"converge", "measure Fermi-Dirac to Maxwell-Boltzmann convergence as eta decreases"},
        {"crosscheck", "compare x(0) against a direct radial integration"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        for (const SettingInfo& s : kSettings) {
            const std::string key = s.key;
            const std::string flag = key == "out" ? "-o,--out" : "--" + key;
            sub->add_option_function<std::string>(
                flag, [&flags, key](const std::string& v) { flags[key] = v; }, s.help);
        }
        sub->add_option("--config", config_path, "key=value or JSON config file");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        std::map<std::string, std::string> raw;
        if (!config_path.empty())
            raw = read_config_file(config_path);
        for (const auto& [key, value] : flags)
            raw[key] = value;
        cfg = resolve_config(command, raw);
    } catch (const std::exception& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::ostream& log = cfg.out.empty() ? err : out;
    try {
        if (command == "mass-curve")
            cmd_mass_curve(cfg, out, log, err);
        else if (command == "phase")
            cmd_phase(cfg, out, log);
        else if (command == "multiplicity")
            cmd_multiplicity(cfg, out, log, err);
        else if (command == "converge")
            cmd_converge(cfg, out, log);
        else
            cmd_crosscheck(cfg, out, log);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace fdcloud
