#include "fdcloud/errors.hpp"
#include "fdcloud/fermi.hpp"
#include "fdcloud/models.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fdcloud;
using fdtest::rel_err;

namespace {

// Analytic sup_z z^{-1-2/d} S(z) for the simplified model: with u = z^{1/d}
// the objective is eta u^{d-3} / (1 + eta u^{d-1}), maximal where
// eta u^{d-1} = (d-3)/2 (d > 3) and tending to eta as z -> 0 when d = 3.
double sfd_majorant_oracle(int d, double eta) {
    if (d == 3)
        return eta;
    const double k = (d - 3.0) / (d - 1.0);
    return 2.0 / (d - 1.0) * std::pow((d - 3.0) / 2.0, k) * std::pow(eta, 2.0 / (d - 1.0));
}

// Five-point derivative of H.
double h_prime(const ModelSpec& m, double z) {
    const double h = 1e-2 * z;
    return (-h_value(m, z + 2 * h) + 8 * h_value(m, z + h) - 8 * h_value(m, z - h) + h_value(m, z - 2 * h)) /
           (12 * h);
}

} // namespace

TEST_CASE("model construction and invariants") {
    CHECK_THROWS_AS(ModelSpec::maxwell_boltzmann(2), DomainError);
    CHECK_THROWS_AS(ModelSpec::simplified_fd(10, 0.1), DomainError);
    CHECK_THROWS_AS(ModelSpec::simplified_fd(3, -0.1), DomainError);
    CHECK_THROWS_AS(ModelSpec::full_fd(3, 0.0), DomainError);
    CHECK_THROWS_AS(ModelSpec::make(ModelKind::MaxwellBoltzmann, 3, 0.1), DomainError);
    const ModelSpec mb = ModelSpec::maxwell_boltzmann(5);
    CHECK(mb.eta() == 0.0);
    CHECK_FALSE(mb.is_fermi());
    for (int d = 3; d <= 9; ++d) {
        for (double eta : {1.0, 1e-2, 1e-5}) {
            const ModelSpec f = ModelSpec::full_fd(d, eta);
            CHECK(f.is_fermi());
            CHECK(rel_err(eta * std::pow(f.mu(), 2.0 / d), 2.0 * std::pow(d, 2.0 / d - 1.0)) < 1e-12);
        }
    }
    CHECK(ModelSpec::make(ModelKind::SimplifiedFD, 3, 0.1) == ModelSpec::simplified_fd(3, 0.1));
    CHECK(kind_name(ModelKind::FullFD) == "ffd");
    CHECK(parse_model_kind("sfd") == ModelKind::SimplifiedFD);
    CHECK_THROWS_AS(parse_model_kind("be"), ConfigError);
}

TEST_CASE("sigma_d is the unit sphere measure") {
    CHECK(rel_err(sigma_d(3), 4.0 * std::numbers::pi) < 1e-15);
    CHECK(rel_err(sigma_d(4), 2.0 * std::numbers::pi * std::numbers::pi) < 1e-15);
    CHECK(rel_err(sigma_d(5), 8.0 * std::pow(std::numbers::pi, 2) / 3.0) < 1e-14);
}

TEST_CASE("mu-eta relation") {
    for (int d = 3; d <= 9; ++d) {
        const double eta1 = 2.0 * std::pow(d, 2.0 / d - 1.0);
        CHECK(rel_err(mu_from_eta(d, eta1), 1.0) < 1e-14);
        CHECK(rel_err(mu_from_eta(d, 0.05) / mu_from_eta(d, 0.1), std::pow(2.0, 0.5 * d)) < 1e-13);
    }
    CHECK(rel_err(mu_from_eta(3, 2.0 * std::pow(3.0, -1.0 / 3.0) / 4.0), 8.0) < 1e-13);
    CHECK(mu_from_eta(3, 1e-8) > mu_from_eta(3, 1e-4));
    CHECK_THROWS_AS(mu_from_eta(3, 0.0), DomainError);
}

TEST_CASE("R and S examples") {
    const ModelSpec mb = ModelSpec::maxwell_boltzmann(3);
    CHECK(r_value(mb, 5.0) == 5.0);
    CHECK(s_value(mb, 123.0) == 0.0);
    const ModelSpec s1 = ModelSpec::simplified_fd(3, 1.0);
    CHECK(r_value(s1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s_value(s1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double eta : {1e-2, 1e-4, 1e-6})
        CHECK(s_value(ModelSpec::simplified_fd(3, eta), 1.0) <= eta);
    CHECK(std::abs(r_value(ModelSpec::full_fd(3, 1e-4), 1.0) - 1.0) < 1e-2);
    CHECK_THROWS_AS(r_value(s1, -1.0), DomainError);
    CHECK_THROWS_AS(s_value(mb, -1.0), DomainError);
    for (const ModelSpec& m : {mb, s1, ModelSpec::full_fd(4, 0.1)}) {
        CHECK(r_value(m, 0.0) == 0.0);
        CHECK(s_value(m, 0.0) == 0.0);
    }
}

TEST_CASE("full model R against the direct Fermi composition") {
    // R = mu (d-2)/4 * zeta(2z/mu), evaluated through zeta_map.
    for (int d : {3, 5, 8}) {
        const ModelSpec m = ModelSpec::full_fd(d, 0.05);
        for (double z : {1e-3, 0.1, 3.0, 100.0, 1e4}) {
            const double direct = m.mu() * (d - 2) / 4.0 * zeta_map(d, 2.0 * z / m.mu());
            CAPTURE(d);
            CAPTURE(z);
            CHECK(rel_err(r_value(m, z), direct) < 1e-8);
            CHECK(rel_err(r_value(m, z) + s_value(m, z), z) < 1e-14);
        }
    }
}

TEST_CASE("full model small-z switch is continuous") {
    const ModelSpec m = ModelSpec::full_fd(3, 1e-2);
    const double z_switch = 0.5e-10 * m.mu();
    const double below = s_value(m, z_switch * (1.0 - 1e-9)) / std::pow(z_switch, 2);
    const double above = s_value(m, z_switch * (1.0 + 1e-9)) / std::pow(z_switch, 2);
    CHECK(rel_err(below, above) < 1e-6);
    CHECK(rel_err(r_over_z(m, z_switch * 0.5), 1.0) < 1e-9);
}

TEST_CASE("R and S property: 0 <= R <= z and S >= 0, fixed seed") {
    fdtest::Gen gen(99);
    for (int i = 0; i < 150; ++i) {
        const int d = gen.integer(3, 9);
        const double eta = gen.log_uniform(1e-5, 1.0);
        const double z = gen.log_uniform(1e-8, 1e8);
        const ModelSpec m = gen.integer(0, 1) ? ModelSpec::simplified_fd(d, eta) : ModelSpec::full_fd(d, eta);
        const double r = r_value(m, z);
        const double s = s_value(m, z);
        CHECK(r >= 0.0);
        CHECK(r <= z);
        CHECK(s >= 0.0);
        CHECK(rel_err(r_over_z(m, z), r / z) < 1e-12);
    }
}

TEST_CASE("H examples and the defining relation H' R = 1") {
    CHECK(h_value(ModelSpec::maxwell_boltzmann(3), std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h_value(ModelSpec::simplified_fd(3, 0.0), std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h_value(ModelSpec::simplified_fd(3, 1.0), 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK_THROWS_AS(h_value(ModelSpec::maxwell_boltzmann(3), 0.0), DomainError);
    NumericsConfig tight;
    tight.quad_rel_tol = 1e-13;
    const ModelSpec models[] = {ModelSpec::maxwell_boltzmann(3), ModelSpec::simplified_fd(3, 0.1),
                                ModelSpec::simplified_fd(7, 1e-2), ModelSpec::full_fd(3, 1e-2),
                                ModelSpec::full_fd(6, 0.1)};
    for (const ModelSpec& m : models) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double z = 1e-2; z <= 1e4; z *= 3.7) {
            CAPTURE(kind_name(m.kind()));
            CAPTURE(z);
            CHECK(rel_err(h_prime(m, z) * r_value(m, z, tight), 1.0) < 1e-6);
            const double h = h_value(m, z, tight);
            CHECK(h > prev);
            prev = h;
        }
    }
}

TEST_CASE("majorant C(eta) for the simplified model matches the analytic sup") {
    CHECK(c_eta_majorant(ModelSpec::maxwell_boltzmann(3)).c_eta == 0.0);
    for (double eta : {1e-1, 1e-2, 1e-3})
        CHECK(rel_err(c_eta_majorant(ModelSpec::simplified_fd(3, eta)).c_eta, eta) < 0.2);
    for (int d = 4; d <= 9; ++d) {
        for (double eta : {1.0, 1e-2, 1e-4}) {
            CAPTURE(d);
            CAPTURE(eta);
            CHECK(rel_err(c_eta_majorant(ModelSpec::simplified_fd(d, eta)).c_eta, sfd_majorant_oracle(d, eta)) <
                  1e-8);
        }
    }
}

TEST_CASE("majorant hypothesis 0 <= S <= C(eta) z^{1+2/d}") {
    for (const ModelSpec& m : {ModelSpec::simplified_fd(3, 1e-2), ModelSpec::simplified_fd(8, 0.3),
                               ModelSpec::full_fd(3, 1e-2), ModelSpec::full_fd(5, 0.1)}) {
        const Majorant maj = c_eta_majorant(m);
        CHECK(maj.exponent == doctest::Approx(1.0 + 2.0 / m.d()));
        for (double z : log_space(1e-8, 1e10, 181)) {
            const double s = s_value(m, z);
            CHECK(s >= 0.0);
            CHECK(s <= maj.c_eta * std::pow(z, maj.exponent) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("straightforward estimate: sup <= 1 for the simplified model with eta <= 1") {
    for (int d = 3; d <= 9; ++d) {
        for (double eta : {1.0, 0.5, 0.1, 1e-3}) {
            CAPTURE(d);
            CAPTURE(eta);
            CHECK(c_eta_majorant(ModelSpec::simplified_fd(d, eta)).c_eta <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("full model majorant equals (2/mu)^{2/d} C(d)") {
    for (int d : {3, 5, 9}) {
        const double c = bound_constant_C(d).value;
        for (double eta : {1e-1, 1e-2}) {
            const ModelSpec m = ModelSpec::full_fd(d, eta);
            const double bound = std::pow(2.0 / m.mu(), 2.0 / d) * c;
            const double sup = c_eta_majorant(m).c_eta;
            CAPTURE(d);
            CAPTURE(eta);
            CHECK(sup <= bound * 1.02);
            CHECK(sup >= bound * 0.98);
        }
    }
}

TEST_CASE("majorant decreases to zero along the eta ladder") {
    for (ModelKind kind : {ModelKind::SimplifiedFD, ModelKind::FullFD}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double eta : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double c = c_eta_majorant(ModelSpec::make(kind, 3, eta)).c_eta;
            CHECK(c < prev);
            CHECK(c > 0.0);
            prev = c;
        }
        CHECK(prev < 1e-3);
    }
}

TEST_CASE("full model tends to the identity as eta -> 0") {
    const ModelSpec m = ModelSpec::full_fd(3, 1e-5);
    const double c = c_eta_majorant(m).c_eta;
    for (double z : log_space(1e-3, 1e3, 25)) {
        const double gap = z - r_value(m, z);
        CHECK(gap >= 0.0);
        CHECK(gap <= c * std::pow(z, 1.0 + 2.0 / 3.0) * (1.0 + 1e-12));
    }
}

TEST_CASE("pressure") {
    CHECK(pressure(ModelSpec::maxwell_boltzmann(3), 2.0, 5.0) == doctest::Approx(10.0).epsilon(1e-14));
    // Simplified model: P(z) = z + eta z^{2-1/d} / (2 - 1/d) exactly.
    for (int d : {3, 6}) {
        const double eta = 0.2, theta = 1.7, rho = 3.0;
        const double z = rho * std::pow(theta, -0.5 * d);
        const double exact = std::pow(theta, 0.5 * d + 1.0) *
                             (z + eta * std::pow(z, 2.0 - 1.0 / d) / (2.0 - 1.0 / d));
        CHECK(rel_err(pressure(ModelSpec::simplified_fd(d, eta), theta, rho), exact) < 1e-9);
    }
    for (const ModelSpec& m : {ModelSpec::simplified_fd(3, 0.1), ModelSpec::full_fd(3, 0.1), ModelSpec::full_fd(7, 1.0)})
        for (double rho : {0.1, 10.0, 1e3})
            CHECK(pressure(m, 0.5, rho) >= rho * 0.5);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double eta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double gap = pressure(ModelSpec::simplified_fd(3, eta), 1.0, 2.0) - 2.0;
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);
    CHECK_THROWS_AS(pressure(ModelSpec::maxwell_boltzmann(3), 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(pressure(ModelSpec::maxwell_boltzmann(3), 1.0, -1.0), DomainError);
}
