#include "fdcloud/fermi.hpp"

#include "fdcloud/errors.hpp"

#include <cmath>
#include <string>

namespace fdcloud {

namespace {

constexpr double kClassicalCutoff = -30.0;
constexpr double kSeriesCutoff = -2.0;

// sum_{k>=1} (-1)^{k+1} u^k / k^{a+1}, 0 < u <= e^{-2}.
double classical_series(double a, double u) {
    double sum = 0.0;
    double uk = 1.0;
    for (int k = 1; k < 200; ++k) {
        uk *= u;
        const double term = uk / std::pow(static_cast<double>(k), a + 1.0);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-17 * sum)
            break;
    }
    return sum;
}

// sum_{k>=2} (-1)^k (k-1) u^k / k^{a+1}: the part of the classical series of
// f_a left over after subtracting a * f_{a-1} (term by term, a*Gamma(a) = Gamma(a+1)).
double excess_series(double a, double u) {
    double sum = 0.0;
    double uk = u;
    for (int k = 2; k < 200; ++k) {
        uk *= u;
        const double term = (k - 1) * uk / std::pow(static_cast<double>(k), a + 1.0);
        sum += (k % 2 == 0) ? term : -term;
        if (term < 1e-17 * sum)
            break;
    }
    return sum;
}

double occupation(double arg) {  // 1 / (1 + e^arg) without overflow
    return arg > 0.0 ? std::exp(-arg) / (1.0 + std::exp(-arg)) : 1.0 / (1.0 + std::exp(arg));
}

double fermi_quadrature(double a, double z, const NumericsConfig& cfg) {
    // x = t^p with p = 2 for a >= -1/2 (integer exponents for every
    // half-integer order), p = 1/(a+1) below that (flat integrand at 0).
    const double p = a >= -0.5 ? 2.0 : 1.0 / (a + 1.0);
    const double power = p * (a + 1.0) - 1.0;
    const double margin = cfg.quad_split_margin;
    auto integrand = [=](double t) { return p * std::pow(t, power) * occupation(std::pow(t, p) - z); };
    const double split = std::pow(std::max(z, 0.0) + margin, 1.0 / p);
    if (z <= 2.0 * margin)
        return integrate_semi_infinite(integrand, split, cfg).value;
    // Deep in the degenerate regime the edge x ~ z is narrow compared with
    // [0, split]; it gets its own interval, starting at x = z - margin, with
    // x - z evaluated relative to that point to avoid cancellation.
    const double edge = std::pow(z - margin, 1.0 / p);
    const double edge_x = z - margin;
    auto near_edge = [=](double t) {
        const double arg = -margin + edge_x * std::expm1(p * std::log1p(t / edge));
        return p * std::pow(edge + t, power) * occupation(arg);
    };
    return integrate_interval(integrand, 0.0, edge, cfg).value +
           integrate_semi_infinite(near_edge, split - edge, cfg).value;
}

} // namespace

void require_dimension(int d) {
    if (d < 3 || d > 9)
        throw DomainError("dimension d = " + std::to_string(d) + " outside the supported range 3..9");
}

FermiOrder::FermiOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > -1.0) || !std::isfinite(alpha))
        throw DomainError("Fermi order must satisfy alpha > -1, got " + std::to_string(alpha));
}

double fermi_asymptotic(FermiOrder alpha, double z, FermiBranch branch) {
    const double a = alpha.value();
    if (branch == FermiBranch::classical)
        return std::tgamma(a + 1.0) * std::exp(z);
    if (z <= 0.0)
        return 0.0;
    return std::pow(z, a + 1.0) / (a + 1.0);
}

double fermi_f(FermiOrder alpha, double z, const NumericsConfig& cfg) {
    if (std::isnan(z))
        throw DomainError("fermi_f argument is NaN");
    const double a = alpha.value();
    if (z < kClassicalCutoff)
        return fermi_asymptotic(alpha, z, FermiBranch::classical);
    if (z <= kSeriesCutoff)
        return std::tgamma(a + 1.0) * classical_series(a, std::exp(z));
    return fermi_quadrature(a, z, cfg);
}

double fermi_f_inverse(FermiOrder alpha, double y, const NumericsConfig& cfg) {
    if (!(y > 0.0) || !std::isfinite(y))
        throw DomainError("fermi_f_inverse requires y > 0");
    const double a = alpha.value();
    // f_a(z) <= Gamma(a+1) e^z for every z, so this is a lower bound of the root;
    // it is the exact inverse wherever fermi_f uses the classical leading term.
    const double lo = std::log(y / std::tgamma(a + 1.0));
    if (lo < kClassicalCutoff)
        return lo;
    const double hi = std::pow((a + 1.0) * y, 1.0 / (a + 1.0)) + 10.0;
    const double log_y = std::log(y);
    auto residual = [&](double z) { return std::log(fermi_f(alpha, z, cfg)) - log_y; };
    return find_root_monotone(residual, lo, std::max(hi, lo + 1.0), cfg);
}

double zeta_map(int d, double w, const NumericsConfig& cfg) {
    require_dimension(d);
    if (!(w > 0.0))
        throw DomainError("zeta_map requires w > 0");
    const double a = 0.5 * d - 1.0;
    const double t = fermi_f_inverse(FermiOrder(a), w, cfg);
    return fermi_f(FermiOrder(a - 1.0), t, cfg);
}

double zeta_excess(int d, double w, const NumericsConfig& cfg) {
    require_dimension(d);
    if (!(w > 0.0))
        throw DomainError("zeta_excess requires w > 0");
    const double a = 0.5 * d - 1.0;
    const double t = fermi_f_inverse(FermiOrder(a), w, cfg);
    if (t <= kSeriesCutoff)
        return std::tgamma(a + 1.0) * excess_series(a, std::exp(t));
    return w - a * fermi_f(FermiOrder(a - 1.0), t, cfg);
}

double bound_objective(int d, double w, const NumericsConfig& cfg) {
    return zeta_excess(d, w, cfg) / std::pow(w, 1.0 + 2.0 / d);
}

BoundConstant bound_constant_C(int d, const NumericsConfig& cfg) {
    require_dimension(d);
    const std::vector<double> grid = log_space(1e-6, 1e8, 14 * 40 + 1);
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = bound_objective(d, grid[i], cfg);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (!(best_value > 0.0))
        throw ConsistencyError("bound objective is nonpositive on the whole grid");

    const double lo = std::log(grid[best == 0 ? 0 : best - 1]);
    const double hi = std::log(grid[best + 1 == grid.size() ? best : best + 1]);
    const MaxResult refined = maximize_golden(
        [&](double lw) { return bound_objective(d, std::exp(lw), cfg); }, lo, hi, 1e-10);

    BoundConstant out;
    if (refined.value >= best_value) {
        out.value = refined.value;
        out.argmax = std::exp(refined.arg);
    } else {
        out.value = best_value;
        out.argmax = grid[best];
    }
    out.rel_accuracy = std::abs(out.value - best_value) / out.value;
    return out;
}

} // namespace fdcloud
