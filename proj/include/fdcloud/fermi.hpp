#pragma once

// Complete Fermi-Dirac integrals
//
//     f_a(z) = int_0^inf x^a / (1 + exp(x - z)) dx,   a > -1,
//
// their inverses in z, the two limiting branches (classical z -> -inf and
// degenerate z -> +inf), the composition zeta(w) = f_{d/2-2}(f_{d/2-1}^{-1}(w))
// and the constant
//
//     C(d) = max_w w^{-1-2/d} (w - (d-2)/2 zeta(w))
//
// bounding the deviation of the Fermi-Dirac nonlinearity from the identity.
//
// Evaluation regimes of f_a:
//   z < -30        leading classical term Gamma(a+1) e^z (relative error < 1e-13)
//   -30 <= z <= -2 alternating series Gamma(a+1) sum (-1)^{k+1} e^{kz} / k^{a+1}
//   z > -2         adaptive quadrature after the substitution x = t^p, which
//                  removes the x^a endpoint singularity

#include "fdcloud/numerics.hpp"

namespace fdcloud {

// Order a of a Fermi integral; a > -1 for integrability at the origin.
class FermiOrder {
public:
    explicit FermiOrder(double alpha);
    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

enum class FermiBranch { degenerate, classical };

double fermi_f(FermiOrder alpha, double z, const NumericsConfig& cfg = {});

// z with fermi_f(alpha, z) = y, for y > 0.
double fermi_f_inverse(FermiOrder alpha, double y, const NumericsConfig& cfg = {});

// degenerate: max(z, 0)^{a+1} / (a+1);  classical: Gamma(a+1) e^z.
double fermi_asymptotic(FermiOrder alpha, double z, FermiBranch branch);

// zeta(w) = f_{d/2-2}(f_{d/2-1}^{-1}(w)), 3 <= d <= 9, w > 0.
double zeta_map(int d, double w, const NumericsConfig& cfg = {});

// w - (d-2)/2 * zeta(w), evaluated without cancellation in the classical
// regime. Nonnegative; behaves like w^2 / (Gamma(d/2) 2^{d/2}) as w -> 0.
double zeta_excess(int d, double w, const NumericsConfig& cfg = {});

// w^{-1-2/d} * zeta_excess(d, w), the function maximized by C(d).
double bound_objective(int d, double w, const NumericsConfig& cfg = {});

struct BoundConstant {
    double value = 0.0;
    double argmax = 0.0;
    // Relative gap between the coarse grid maximum and the refined maximum.
    double rel_accuracy = 0.0;
};

// Grid search over 40 log-spaced points per decade on [1e-6, 1e8] followed
// by golden-section refinement (in log w) around the best grid cell.
BoundConstant bound_constant_C(int d, const NumericsConfig& cfg = {});

// Checks 3 <= d <= 9, throwing DomainError otherwise.
void require_dimension(int d);

} // namespace fdcloud
