#include "fdcloud/errors.hpp"
#include "fdcloud/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace fdcloud {

namespace {

constexpr int kMaxExpansions = 100;
constexpr int kMaxIterations = 500;

double checked(const ScalarFn& g, double x) {
    const double v = g(x);
    if (std::isnan(v))
        throw DomainError("root function returned NaN at x = " + std::to_string(x));
    return v;
}

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

} // namespace

double find_root_monotone(const ScalarFn& g, double lo, double hi, const NumericsConfig& cfg) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("root bracket must be finite");
    if (lo > hi)
        std::swap(lo, hi);
    if (lo == hi)
        throw DomainError("root bracket is empty");

    double a = lo, b = hi;
    double fa = checked(g, a);
    double fb = checked(g, b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;

    // Widen on the side with the smaller residual; for a monotone function
    // that is the side facing the root.
    for (int k = 0; !opposite(fa, fb); ++k) {
        if (k == kMaxExpansions)
            throw BracketError("no sign change found after bracket expansion");
        const double width = b - a;
        if (std::abs(fa) < std::abs(fb)) {
            a -= 1.6 * width;
            fa = checked(g, a);
            if (fa == 0.0)
                return a;
        } else {
            b += 1.6 * width;
            fb = checked(g, b);
            if (fb == 0.0)
                return b;
        }
        if (!std::isfinite(a) || !std::isfinite(b))
            throw BracketError("bracket expansion overflowed");
    }

    // Brent's method; [b, c] always brackets the root.
    const double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        if (opposite(fb, fc) == false) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * cfg.root_tol * std::max(1.0, std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0)
            return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (xm > 0.0 ? tol : -tol);
        fb = checked(g, b);
    }
    throw NumericalError("root finder exceeded its iteration limit");
}

} // namespace fdcloud
