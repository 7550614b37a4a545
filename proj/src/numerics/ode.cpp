#include "fdcloud/errors.hpp"
#include "fdcloud/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fdcloud {

namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense output coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kBlowUp = 1e300;

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double rms_scaled(std::span<const double> v, std::span<const double> scale) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double q = v[i] / scale[i];
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(v.size()));
}

} // namespace

std::span<const double> OdeSolution::node_state(std::size_t i) const {
    return {states_.data() + i * dim_, dim_};
}

std::size_t OdeSolution::locate(double t) const {
    const bool forward = times_.back() >= times_.front();
    // Index of the step [times_[k], times_[k+1]] containing t.
    auto it = forward ? std::upper_bound(times_.begin(), times_.end(), t)
                      : std::upper_bound(times_.begin(), times_.end(), t, std::greater<>());
    std::size_t k = static_cast<std::size_t>(it - times_.begin());
    if (k == 0)
        k = 1;
    if (k >= times_.size())
        k = times_.size() - 1;
    return k - 1;
}

void OdeSolution::evaluate(double t, std::span<double> out) const {
    if (times_.empty())
        throw DomainError("evaluate on an empty ODE solution");
    const double lo = std::min(times_.front(), times_.back());
    const double hi = std::max(times_.front(), times_.back());
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    if (t < lo - slack || t > hi + slack)
        throw DomainError("dense evaluation outside the integrated range at t = " + std::to_string(t));
    if (times_.size() == 1) {
        std::copy_n(states_.begin(), dim_, out.begin());
        return;
    }
    const std::size_t k = locate(t);
    const double h = times_[k + 1] - times_[k];
    const double theta = (t - times_[k]) / h;
    const double theta1 = 1.0 - theta;
    const double* y0 = states_.data() + k * dim_;
    const double* r = dense_.data() + k * 4 * dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
        const double r2 = r[i], r3 = r[dim_ + i], r4 = r[2 * dim_ + i], r5 = r[3 * dim_ + i];
        out[i] = y0[i] + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
    }
}

std::vector<double> OdeSolution::evaluate(double t) const {
    std::vector<double> out(dim_);
    evaluate(t, out);
    return out;
}

OdeSolution ode_integrate(const VectorField& field, double t0, std::vector<double> u0, double t1,
                          const NumericsConfig& cfg, std::vector<double> abs_tol) {
    cfg.validate();
    const std::size_t n = u0.size();
    if (n == 0)
        throw DomainError("ode_integrate needs a non-empty state");
    if (!all_finite(u0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw DomainError("ode_integrate needs finite initial data");

    OdeSolution sol;
    sol.dim_ = n;
    sol.times_.push_back(t0);
    sol.states_.insert(sol.states_.end(), u0.begin(), u0.end());
    if (t0 == t1)
        return sol;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span_len = std::abs(t1 - t0);
    const double rtol = cfg.ode_rel_tol;
    if (abs_tol.empty())
        abs_tol.assign(n, cfg.ode_abs_tol);
    if (abs_tol.size() != n || !std::all_of(abs_tol.begin(), abs_tol.end(), [](double a) { return a > 0.0; }))
        throw DomainError("ode_integrate needs one positive absolute tolerance per component");
    const std::vector<double>& atol = abs_tol;

    std::vector<double> y = std::move(u0), ynew(n), ytmp(n), err(n), sk(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

    double t = t0;
    field(t, y, k1);
    if (!all_finite(k1))
        throw BlowUpError("vector field is not finite at the initial state", t, y);

    // Initial step (Hairer, Norsett, Wanner: hinit).
    for (std::size_t i = 0; i < n; ++i)
        sk[i] = atol[i] + rtol * std::abs(y[i]);
    double h;
    {
        const double dn0 = rms_scaled(y, sk);
        const double dn1 = rms_scaled(k1, sk);
        double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
        h0 = std::min(h0, span_len);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + dir * h0 * k1[i];
        field(t + dir * h0, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            err[i] = k2[i] - k1[i];
        const double dn2 = all_finite(k2) ? rms_scaled(err, sk) / h0 : 1e300;
        const double dmax = std::max(dn1, dn2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        h = std::min({100.0 * h0, h1, span_len});
    }

    long steps = 0;
    bool last_rejected = false;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > cfg.max_steps)
            throw StepLimitError("ODE integration exceeded max_steps", t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepLimitError("ODE step size underflow", t);

        bool last = false;
        if (h >= std::abs(t1 - t) * (1.0 - 1e-12)) {
            h = std::abs(t1 - t);
            last = true;
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * a21 * k1[i];
        field(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        field(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        field(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        field(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double t_new = last ? t1 : t + hs;
        field(t_new, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        field(t_new, ynew, k7);

        bool finite = all_finite(ynew) && all_finite(k2) && all_finite(k3) && all_finite(k4) &&
                      all_finite(k5) && all_finite(k6) && all_finite(k7);
        double err_norm = 1e300;
        if (finite) {
            for (std::size_t i = 0; i < n; ++i) {
                err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
                sk[i] = atol[i] + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            }
            err_norm = rms_scaled(err, sk);
            finite = std::isfinite(err_norm);
        }

        if (!finite) {
            h *= 0.2;
            last_rejected = true;
            continue;
        }

        if (err_norm > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
            last_rejected = true;
            continue;
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(ynew[i]) > kBlowUp)
                throw BlowUpError("solution magnitude exceeded 1e300 (finite-time explosion)", t, y);
        }

        // Dense output coefficients r2..r5 for this step.
        const std::size_t off = sol.dense_.size();
        sol.dense_.resize(off + 4 * n);
        double* r = sol.dense_.data() + off;
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = hs * k1[i] - ydiff;
            r[i] = ydiff;
            r[n + i] = bspl;
            r[2 * n + i] = ydiff - hs * k7[i] - bspl;
            r[3 * n + i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                 d7 * k7[i]);
        }

        t = t_new;
        std::swap(y, ynew);
        std::swap(k1, k7);
        sol.times_.push_back(t);
        sol.states_.insert(sol.states_.end(), y.begin(), y.end());

        double fac = err_norm == 0.0 ? 10.0 : 0.9 * std::pow(err_norm, -0.2);
        fac = std::clamp(fac, 0.2, 10.0);
        if (last_rejected)
            fac = std::min(fac, 1.0);
        h *= fac;
        last_rejected = false;
    }
    return sol;
}

} // namespace fdcloud
