#include "fdcloud/errors.hpp"
#include "fdcloud/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace fdcloud {

void NumericsConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(name) + " must be a finite positive number");
    };
    positive(quad_rel_tol, "quad_rel_tol");
    positive(quad_split_margin, "quad_split_margin");
    positive(root_tol, "root_tol");
    positive(ode_rel_tol, "ode_rel_tol");
    positive(ode_abs_tol, "ode_abs_tol");
    if (max_steps < 1)
        throw ConfigError("max_steps must be >= 1");
    if (!std::isfinite(s_start) || s_start > -10.0)
        throw ConfigError("s_start must be <= -10 (asymptotic regime)");
}

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIntervals = 4000;
constexpr int kMaxTailPanels = 64;

struct Segment {
    double a, b, value, err;
};

struct ByError {
    bool operator()(const Segment& l, const Segment& r) const {
        if (l.err != r.err)
            return l.err < r.err;
        return l.a > r.a;  // deterministic tie-break
    }
};

double checked(const ScalarFn& f, double x) {
    const double v = f(x);
    if (std::isnan(v))
        throw DomainError("integrand returned NaN at x = " + std::to_string(x));
    return v;
}

Segment gauss_kronrod_15(const ScalarFn& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked(f, center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> fv1{}, fv2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = checked(f, center - dx);
        fv2[j] = checked(f, center + dx);
        const double sum = fv1[j] + fv2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1)
            resg += kWg[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(50.0 * kEps * resabs, err);
    return {a, b, value, err};
}

} // namespace

QuadResult integrate_interval(const ScalarFn& f, double a, double b, const NumericsConfig& cfg) {
    if (!(a < b))
        throw DomainError("integrate_interval requires a < b");

    std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
    Segment first = gauss_kronrod_15(f, a, b);
    double total = first.value;
    double total_err = first.err;
    heap.push(first);

    int intervals = 1;
    while (total_err > cfg.quad_rel_tol * std::abs(total) && total_err > 0.0) {
        if (intervals >= kMaxIntervals)
            throw QuadratureError("adaptive quadrature did not converge", total, total_err);
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw QuadratureError("quadrature interval collapsed below machine resolution", total,
                                  total_err);
        heap.pop();
        Segment left = gauss_kronrod_15(f, worst.a, mid);
        Segment right = gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++intervals;
        // Recompute sums from scratch now and then to stop drift in the
        // running totals from controlling termination.
        if (intervals % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().err;
                copy.pop();
            }
        }
    }
    return {total, total_err};
}

QuadResult integrate_semi_infinite(const ScalarFn& f, double split_point, const NumericsConfig& cfg) {
    if (std::isnan(split_point))
        throw DomainError("split point is NaN");
    const double split = std::max(split_point, 0.0);

    QuadResult result;
    if (split > 0.0)
        result = integrate_interval(f, 0.0, split, cfg);

    double lo = split;
    double width = 1.0;
    for (int panel = 0; panel < kMaxTailPanels; ++panel) {
        const QuadResult piece = integrate_interval(f, lo, lo + width, cfg);
        result.value += piece.value;
        result.err_est += piece.err_est;
        if (std::abs(piece.value) <= 0.1 * cfg.quad_rel_tol * std::abs(result.value)) {
            // The last panel bounds the neglected remainder of a decaying tail.
            result.err_est += std::abs(piece.value);
            return result;
        }
        lo += width;
        width *= 2.0;
    }
    throw QuadratureError("tail of semi-infinite integral did not decay", result.value,
                          result.err_est);
}

MaxResult maximize_golden(const ScalarFn& f, double a, double b, double x_tol) {
    if (a > b)
        std::swap(a, b);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? MaxResult{c, fc} : MaxResult{d, fd};
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
    if (n < 2 || !(lo > 0.0) || !(hi > 0.0))
        throw DomainError("log_space needs n >= 2 and positive bounds");
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> lin_space(double lo, double hi, std::size_t n) {
    if (n < 2)
        throw DomainError("lin_space needs n >= 2");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

} // namespace fdcloud
