#include "fdcloud/errors.hpp"
#include "fdcloud/fermi.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fdcloud;
using fdtest::rel_err;

namespace {

double logistic_tail(double x) {  // 1 / (1 + e^x) without overflow
    return x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

// Independent oracle: composite Simpson rule for
//   f_a(z) = int_0^inf 2 t^{2a+1} / (1 + e^{t^2 - z}) dt   (x = t^2),
// smooth for a >= -1/2.
double fermi_oracle(double a, double z) {
    const double upper = std::sqrt(std::max(z, 0.0) + 60.0);
    const int n = 40000;
    const double h = upper / n;
    auto g = [&](double t) { return 2.0 * std::pow(t, 2.0 * a + 1.0) * logistic_tail(t * t - z); };
    double sum = g(0.0) + g(upper);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * g(i * h);
    return sum * h / 3.0;
}

// Two-term Sommerfeld expansion, accurate to O(z^{a-3}) for large z.
double sommerfeld(double a, double z) {
    return std::pow(z, a + 1.0) / (a + 1.0) * (1.0 + std::numbers::pi * std::numbers::pi / 6.0 * (a + 1.0) * a / (z * z));
}

} // namespace

TEST_CASE("order validation") {
    CHECK_THROWS_AS(FermiOrder(-1.0), DomainError);
    CHECK_THROWS_AS(FermiOrder(-2.0), DomainError);
    CHECK_THROWS_AS(FermiOrder(std::nan("")), DomainError);
    CHECK(FermiOrder(-0.99).value() == -0.99);
}

TEST_CASE("fermi_f examples") {
    CHECK(rel_err(fermi_f(FermiOrder(0.0), 0.0), std::log(2.0)) < 1e-10);
    CHECK(rel_err(fermi_f(FermiOrder(1.0), 0.0), std::numbers::pi * std::numbers::pi / 12.0) < 1e-10);
    // Classical asymptotic within 1%.
    const double classical = std::tgamma(1.5) * std::exp(-20.0);
    CHECK(rel_err(fermi_f(FermiOrder(0.5), -20.0), classical) < 1e-2);
}

TEST_CASE("fermi_f against frozen high-precision values") {
    // Polylogarithm values, f_a(z) = -Gamma(a+1) Li_{a+1}(-e^z), at 30 digits.
    struct Pin {
        double a, z, value;
    };
    const Pin pins[] = {
        {0.5, 2.0, 2.5024578260071403},   {-0.5, 0.0, 1.0721549299401913},
        {1.5, 3.0, 10.353714864761452},   {0.5, -20.0, 1.8266498363684073e-9},
        {2.5, 10.0, 1034.6842541815338},  {-0.5, -5.0, 0.011886110954227805},
        {1.0, 0.0, 0.82246703342411322},  {0.5, 1000.0, 21081.877076502917},
    };
    for (const Pin& p : pins) {
        CAPTURE(p.a);
        CAPTURE(p.z);
        CHECK(rel_err(fermi_f(FermiOrder(p.a), p.z), p.value) < 1e-9);
    }
}

TEST_CASE("fermi_f(0, z) = log(1 + e^z) on 200 points") {
    for (int i = 0; i < 200; ++i) {
        const double z = -30.0 + 60.0 * i / 199.0;
        CHECK(rel_err(fermi_f(FermiOrder(0.0), z), std::log1p(std::exp(z))) < 1e-8);
    }
}

TEST_CASE("fermi_f against the Simpson oracle across regimes") {
    for (double a : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.5}) {
        for (double z : {-45.0, -31.0, -29.0, -10.0, -2.5, -1.5, 0.0, 3.0, 17.0, 60.0}) {
            CAPTURE(a);
            CAPTURE(z);
            CHECK(rel_err(fermi_f(FermiOrder(a), z), fermi_oracle(a, z)) < 1e-8);
        }
    }
}

TEST_CASE("fermi_f at large z against the Sommerfeld expansion") {
    for (double a : {-0.5, 0.5, 1.0, 2.5}) {
        for (double z : {1e3, 1e5, 1e6}) {
            CAPTURE(a);
            CAPTURE(z);
            CHECK(rel_err(fermi_f(FermiOrder(a), z), sommerfeld(a, z)) < 1e-8);
        }
    }
}

TEST_CASE("orders below -1/2 stay accurate") {
    // f_a(z) for z << 0 is Gamma(a+1) e^z (1 - e^z / 2^{a+1} + ...).
    for (double a : {-0.9, -0.75}) {
        const double z = -3.0;
        double series = 0.0;
        for (int k = 1; k < 60; ++k)
            series += (k % 2 ? 1.0 : -1.0) * std::exp(k * z) / std::pow(k, a + 1.0);
        CHECK(rel_err(fermi_f(FermiOrder(a), z), std::tgamma(a + 1.0) * series) < 1e-8);
    }
    // Monotone across the regime switches.
    double prev = 0.0;
    for (double z = -40.0; z < 20.0; z += 0.25) {
        const double v = fermi_f(FermiOrder(-0.9), z);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("monotonicity in z") {
    for (double a : {-0.5, 0.0, 0.5, 1.0, 2.5}) {
        double prev = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double z = -50.0 + 100.0 * i / 99.0;
            const double v = fermi_f(FermiOrder(a), z);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("derivative identity d/dz f_a = a f_{a-1}") {
    for (double a : {1.0, 1.5, 2.5}) {
        for (double z = -5.0; z <= 20.0; z += 1.25) {
            const double h = 1e-3;
            const double fd = (fermi_f(FermiOrder(a), z + h) - fermi_f(FermiOrder(a), z - h)) / (2.0 * h);
            CAPTURE(a);
            CAPTURE(z);
            CHECK(rel_err(fd, a * fermi_f(FermiOrder(a - 1.0), z)) < 1e-5);
        }
    }
}

TEST_CASE("inverse examples") {
    CHECK(std::abs(fermi_f_inverse(FermiOrder(0.0), std::log(2.0))) < 1e-10);
    CHECK(std::abs(fermi_f_inverse(FermiOrder(0.5), fermi_f(FermiOrder(0.5), 2.0)) - 2.0) < 1e-7);
    CHECK(rel_err(fermi_f_inverse(FermiOrder(0.5), 1e6), std::pow(1.5e6, 2.0 / 3.0)) < 5e-3);
    CHECK_THROWS_AS(fermi_f_inverse(FermiOrder(0.5), 0.0), DomainError);
    CHECK_THROWS_AS(fermi_f_inverse(FermiOrder(0.5), -1.0), DomainError);
}

TEST_CASE("inverse round trip, 50 random pairs") {
    fdtest::Gen gen(314159);
    for (int i = 0; i < 50; ++i) {
        const double a = gen.uniform(-0.95, 3.0);
        const double z = gen.uniform(-45.0, 80.0);
        const double y = fermi_f(FermiOrder(a), z);
        const double back = fermi_f_inverse(FermiOrder(a), y);
        CAPTURE(a);
        CAPTURE(z);
        CHECK(std::abs(back - z) <= 1e-7 * std::max(1.0, std::abs(z)));
        CHECK(rel_err(fermi_f(FermiOrder(a), back), y) < 1e-8);
    }
}

TEST_CASE("asymptotic branches") {
    CHECK(rel_err(fermi_asymptotic(FermiOrder(0.0), 30.0, FermiBranch::classical), std::exp(30.0)) < 1e-14);
    CHECK(fermi_asymptotic(FermiOrder(1.0), 100.0, FermiBranch::degenerate) == doctest::Approx(5000.0));
    CHECK(fermi_asymptotic(FermiOrder(1.0), -1.0, FermiBranch::degenerate) == 0.0);
    CHECK(rel_err(fermi_asymptotic(FermiOrder(0.5), 40.0, FermiBranch::degenerate), fermi_f(FermiOrder(0.5), 40.0)) <
          0.05);
    for (double a : {-0.5, 0.5, 1.0}) {
        for (double z : {-15.0, -20.0, -40.0})
            CHECK(rel_err(fermi_asymptotic(FermiOrder(a), z, FermiBranch::classical), fermi_oracle(a, z)) < 0.01);
        for (double z : {40.0, 100.0, 1000.0})
            CHECK(rel_err(fermi_asymptotic(FermiOrder(a), z, FermiBranch::degenerate), fermi_f(FermiOrder(a), z)) <
                  0.05);
    }
}

TEST_CASE("zeta map") {
    CHECK_THROWS_AS(zeta_map(3, 0.0), DomainError);
    CHECK_THROWS_AS(zeta_map(2, 1.0), DomainError);
    CHECK_THROWS_AS(zeta_map(10, 1.0), DomainError);
    // Exact inner round trip at z = 0.
    CHECK(rel_err(zeta_map(4, fermi_f(FermiOrder(1.0), 0.0)), std::log(2.0)) < 1e-9);
    // Classical end: zeta(w) / w -> Gamma(d/2-1)/Gamma(d/2) = 2/(d-2).
    for (int d = 3; d <= 9; ++d)
        CHECK(rel_err(zeta_map(d, 1e-9) / 1e-9, 2.0 / (d - 2)) < 1e-6);
    // Degenerate end for d = 6: f_2^{-1}(w) ~ (3w)^{1/3}, f_1(t) ~ t^2/2.
    CHECK(rel_err(zeta_map(6, 1e6), 0.5 * std::pow(3e6, 2.0 / 3.0)) < 0.02);
    // Strictly increasing.
    for (int d : {3, 5, 9}) {
        double prev = 0.0;
        for (double lw = -12.0; lw <= 12.0; lw += 0.5) {
            const double v = zeta_map(d, std::pow(10.0, lw));
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("zeta excess agrees with the direct difference and its small-w limit") {
    for (int d = 3; d <= 9; ++d) {
        for (double w : {0.3, 1.0, 10.0, 1e3}) {
            const double direct = w - 0.5 * (d - 2) * zeta_map(d, w);
            CAPTURE(d);
            CAPTURE(w);
            CHECK(rel_err(zeta_excess(d, w), direct) < 1e-7);
        }
        const double w = 1e-7;
        const double limit = w * w / (std::tgamma(0.5 * d) * std::pow(2.0, 0.5 * d));
        CHECK(rel_err(zeta_excess(d, w), limit) < 1e-5);
        for (double lw = -12.0; lw <= 10.0; lw += 1.0)
            CHECK(zeta_excess(d, std::pow(10.0, lw)) >= 0.0);
    }
}

TEST_CASE("bound constant C(d)") {
    // Frozen pin for d = 3: golden-section maximum of the objective with the
    // polylogarithm at 20 digits, argmax w = 1.1660565.
    const BoundConstant c3 = bound_constant_C(3);
    CHECK(rel_err(c3.value, 0.279709244970311) < 1e-9);
    CHECK(c3.rel_accuracy < 0.01);
    CHECK(c3.argmax > 0.5);
    CHECK(c3.argmax < 2.5);

    double prev = std::numeric_limits<double>::infinity();
    for (int d = 3; d <= 9; ++d) {
        const BoundConstant c = bound_constant_C(d);
        CAPTURE(d);
        CHECK(c.value > 0.0);
        CHECK(c.value < prev);  // decreasing in d
        CHECK(c.rel_accuracy < 0.01);
        CHECK(std::abs(bound_objective(d, c.argmax) - c.value) <= 1e-12 * c.value);
        prev = c.value;
        // The maximum dominates the grid ends and a fine neighborhood scan.
        for (double f = 0.5; f <= 2.0; f += 0.05)
            CHECK(bound_objective(d, c.argmax * f) <= c.value * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(bound_constant_C(2), DomainError);
}

TEST_CASE("bound objective at the ends of the search range") {
    for (int d = 3; d <= 9; ++d) {
        const double c = bound_constant_C(d).value;
        CAPTURE(d);
        if (d >= 5)
            CHECK(bound_objective(d, 1e-6) <= 1e-3 * c);
        if (d <= 8)
            CHECK(bound_objective(d, 1e8) <= 0.1 * c);
        // Decay rates at both ends hold for every d: w^{1-2/d} near 0 and
        // w^{-2/d} at infinity.
        const double slope_lo = std::log(bound_objective(d, 1e-6) / bound_objective(d, 1e-8)) / std::log(100.0);
        CHECK(std::abs(slope_lo - (1.0 - 2.0 / d)) < 1e-3);
        const double slope_hi = std::log(bound_objective(d, 1e10) / bound_objective(d, 1e8)) / std::log(100.0);
        CHECK(std::abs(slope_hi + 2.0 / d) < 2e-2);
        CHECK(bound_objective(d, 1e-6) < c);
        CHECK(bound_objective(d, 1e8) < c);
    }
}
