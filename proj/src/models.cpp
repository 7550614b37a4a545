#include "fdcloud/models.hpp"

#include "fdcloud/errors.hpp"
#include "fdcloud/fermi.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fdcloud {

namespace {

// Below this value of 2z/mu the full model uses the leading classical term.
constexpr double kTinyDegeneracy = 1e-10;

void require_nonnegative(double z, const char* what) {
    if (!(z >= 0.0) || !std::isfinite(z))
        throw DomainError(std::string(what) + " requires a finite argument z >= 0");
}

double full_fd_excess(const ModelSpec& model, double z, const NumericsConfig& cfg) {
    if (z == 0.0)
        return 0.0;
    const double mu = model.mu();
    const double w = 2.0 * z / mu;
    if (w < kTinyDegeneracy) {
        const double a = 0.5 * model.d() - 1.0;
        return 0.5 * mu * w * w / (std::tgamma(a + 1.0) * std::pow(2.0, a + 1.0));
    }
    return 0.5 * mu * zeta_excess(model.d(), w, cfg);
}

} // namespace

std::string_view kind_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::MaxwellBoltzmann: return "mb";
    case ModelKind::SimplifiedFD: return "sfd";
    case ModelKind::FullFD: return "ffd";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "mb")
        return ModelKind::MaxwellBoltzmann;
    if (name == "sfd")
        return ModelKind::SimplifiedFD;
    if (name == "ffd")
        return ModelKind::FullFD;
    throw ConfigError("unknown model kind '" + std::string(name) + "' (expected mb, sfd or ffd)");
}

ModelSpec ModelSpec::maxwell_boltzmann(int d) {
    require_dimension(d);
    return ModelSpec(ModelKind::MaxwellBoltzmann, d, 0.0, 0.0);
}

ModelSpec ModelSpec::simplified_fd(int d, double eta) {
    require_dimension(d);
    if (!(eta >= 0.0) || !std::isfinite(eta))
        throw DomainError("simplified Fermi-Dirac model needs eta >= 0");
    return ModelSpec(ModelKind::SimplifiedFD, d, eta, 0.0);
}

ModelSpec ModelSpec::full_fd(int d, double eta) {
    require_dimension(d);
    return ModelSpec(ModelKind::FullFD, d, eta, mu_from_eta(d, eta));
}

ModelSpec ModelSpec::make(ModelKind kind, int d, double eta) {
    switch (kind) {
    case ModelKind::MaxwellBoltzmann:
        if (eta != 0.0)
            throw DomainError("Maxwell-Boltzmann model requires eta = 0");
        return maxwell_boltzmann(d);
    case ModelKind::SimplifiedFD: return simplified_fd(d, eta);
    case ModelKind::FullFD: return full_fd(d, eta);
    }
    throw DomainError("unknown model kind");
}

double sigma_d(int d) {
    require_dimension(d);
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double mu_from_eta(int d, double eta) {
    require_dimension(d);
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw DomainError("mu_from_eta requires eta > 0");
    const double dd = d;
    return std::pow(2.0 * std::pow(dd, 2.0 / dd - 1.0) / eta, 0.5 * dd);
}

double s_value(const ModelSpec& model, double z, const NumericsConfig& cfg) {
    require_nonnegative(z, "S");
    switch (model.kind()) {
    case ModelKind::MaxwellBoltzmann: return 0.0;
    case ModelKind::SimplifiedFD: {
        if (z == 0.0 || model.eta() == 0.0)
            return 0.0;
        const double q = model.eta() * std::pow(z, 1.0 - 1.0 / model.d());
        return z * q / (1.0 + q);
    }
    case ModelKind::FullFD: return full_fd_excess(model, z, cfg);
    }
    return 0.0;
}

double r_value(const ModelSpec& model, double z, const NumericsConfig& cfg) {
    require_nonnegative(z, "R");
    switch (model.kind()) {
    case ModelKind::MaxwellBoltzmann: return z;
    case ModelKind::SimplifiedFD: {
        if (z == 0.0)
            return 0.0;
        return z / (1.0 + model.eta() * std::pow(z, 1.0 - 1.0 / model.d()));
    }
    case ModelKind::FullFD: return z - full_fd_excess(model, z, cfg);
    }
    return z;
}

double r_over_z(const ModelSpec& model, double z, const NumericsConfig& cfg) {
    require_nonnegative(z, "R/z");
    switch (model.kind()) {
    case ModelKind::MaxwellBoltzmann: return 1.0;
    case ModelKind::SimplifiedFD: return 1.0 / (1.0 + model.eta() * std::pow(z, 1.0 - 1.0 / model.d()));
    case ModelKind::FullFD: return z == 0.0 ? 1.0 : 1.0 - full_fd_excess(model, z, cfg) / z;
    }
    return 1.0;
}

double h_value(const ModelSpec& model, double z, const NumericsConfig& cfg) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw DomainError("H requires z > 0");
    switch (model.kind()) {
    case ModelKind::MaxwellBoltzmann: return std::log(z);
    case ModelKind::SimplifiedFD: {
        const double dd = model.d();
        return std::log(z) + dd / (dd - 1.0) * model.eta() * std::pow(z, 1.0 - 1.0 / dd);
    }
    case ModelKind::FullFD: {
        // 1/R - 1/t = S / (t R), bounded as t -> 0.
        auto integrand = [&](double t) {
            const double s = full_fd_excess(model, t, cfg);
            return s / (t * (t - s));
        };
        return std::log(z) + integrate_interval(integrand, 0.0, z, cfg).value;
    }
    }
    return std::log(z);
}

Majorant scaled_excess_sup(const ModelSpec& model, double z_lo, double z_hi, int points_per_decade,
                           const NumericsConfig& cfg) {
    const double exponent = 1.0 + 2.0 / model.d();
    Majorant out;
    out.exponent = exponent;
    out.description = "D(z) = z^(1+2/" + std::to_string(model.d()) + ")";
    if (!model.is_fermi())
        return out;

    const double decades = std::log10(z_hi / z_lo);
    const auto n = static_cast<std::size_t>(std::ceil(decades * points_per_decade)) + 1;
    const std::vector<double> grid = log_space(z_lo, z_hi, n);
    auto objective = [&](double z) { return s_value(model, z, cfg) / std::pow(z, exponent); };

    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = objective(grid[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    const double lo = std::log(grid[best == 0 ? 0 : best - 1]);
    const double hi = std::log(grid[best + 1 == grid.size() ? best : best + 1]);
    const MaxResult refined =
        maximize_golden([&](double lz) { return objective(std::exp(lz)); }, lo, hi, 1e-10);
    if (refined.value > best_value) {
        out.c_eta = refined.value;
        out.argmax = std::exp(refined.arg);
    } else {
        out.c_eta = best_value;
        out.argmax = grid[best];
    }
    return out;
}

Majorant c_eta_majorant(const ModelSpec& model, const NumericsConfig& cfg) {
    return scaled_excess_sup(model, 1e-8, 1e10, 400, cfg);
}

double pressure(const ModelSpec& model, double theta, double rho, const NumericsConfig& cfg) {
    if (!(theta > 0.0) || !(rho > 0.0) || !std::isfinite(theta) || !std::isfinite(rho))
        throw DomainError("pressure requires theta > 0 and rho > 0");
    const double half_d = 0.5 * model.d();
    const double z = rho * std::pow(theta, -half_d);
    // P(z) = int_0^z t/R(t) dt = z + int_0^z S/R dt.
    double big_p = z;
    if (model.is_fermi()) {
        auto integrand = [&](double t) {
            const double s = s_value(model, t, cfg);
            return s / (t - s);
        };
        big_p += integrate_interval(integrand, 0.0, z, cfg).value;
    }
    return std::pow(theta, half_d + 1.0) * big_p;
}

} // namespace fdcloud
