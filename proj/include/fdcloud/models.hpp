#pragma once

// Statistics families for the self-gravitating cloud. Each model supplies a
// nonlinearity R with H'(z) R(z) = 1:
//
//   Maxwell-Boltzmann     R(z) = z,                              H(z) = log z
//   simplified Fermi-Dirac R(z) = (1/z + eta z^{-1/d})^{-1},      H(z) = log z + d/(d-1) eta z^{1-1/d}
//   full Fermi-Dirac      R(z) = mu (d-2)/4 f_{d/2-2}(f_{d/2-1}^{-1}(2z/mu)),
//                         with eta mu^{2/d} = 2 d^{2/d-1}
//
// S(z) = z - R(z) >= 0 measures the departure from the classical gas.

#include "fdcloud/numerics.hpp"

#include <string>
#include <string_view>

namespace fdcloud {

enum class ModelKind { MaxwellBoltzmann, SimplifiedFD, FullFD };

// "mb", "sfd", "ffd"
std::string_view kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

class ModelSpec {
public:
    static ModelSpec maxwell_boltzmann(int d);
    static ModelSpec simplified_fd(int d, double eta);
    static ModelSpec full_fd(int d, double eta);
    // Validating factory; eta is ignored (must be 0 or omitted) for MB.
    static ModelSpec make(ModelKind kind, int d, double eta);

    ModelKind kind() const noexcept { return kind_; }
    int d() const noexcept { return d_; }
    double eta() const noexcept { return eta_; }
    // Only meaningful for FullFD; 0 otherwise.
    double mu() const noexcept { return mu_; }
    bool is_fermi() const noexcept { return kind_ != ModelKind::MaxwellBoltzmann; }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

private:
    ModelSpec(ModelKind kind, int d, double eta, double mu) : kind_(kind), d_(d), eta_(eta), mu_(mu) {}

    ModelKind kind_;
    int d_;
    double eta_;
    double mu_;
};

// Surface measure of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2).
double sigma_d(int d);

// mu = (2 d^{2/d-1} / eta)^{d/2}
double mu_from_eta(int d, double eta);

double r_value(const ModelSpec& model, double z, const NumericsConfig& cfg = {});
double s_value(const ModelSpec& model, double z, const NumericsConfig& cfg = {});
double h_value(const ModelSpec& model, double z, const NumericsConfig& cfg = {});

// R(z)/z with the continuous extension 1 at z = 0; this is the factor the
// dynamical system needs, e^{2s} R(e^{-2s} y) = y * r_over_z(e^{-2s} y).
double r_over_z(const ModelSpec& model, double z, const NumericsConfig& cfg = {});

struct Majorant {
    // sup_z z^{-exponent} S(z) over the scan range.
    double c_eta = 0.0;
    double exponent = 0.0;
    double argmax = 0.0;
    std::string description;  // the fixed majorant shape D(z)
};

// C(eta) with S(z) <= C(eta) z^{1+2/d}: 400 log-spaced points per decade on
// [1e-8, 1e10], refined by golden section around the best point.
Majorant c_eta_majorant(const ModelSpec& model, const NumericsConfig& cfg = {});

// Same scan, returning sup_z z^{-1-2/d} S(z) on an arbitrary range.
Majorant scaled_excess_sup(const ModelSpec& model, double z_lo, double z_hi, int points_per_decade,
                           const NumericsConfig& cfg = {});

// p = theta^{d/2+1} P(rho theta^{-d/2}), P(z) = int_0^z t / R(t) dt.
double pressure(const ModelSpec& model, double theta, double rho, const NumericsConfig& cfg = {});

} // namespace fdcloud
