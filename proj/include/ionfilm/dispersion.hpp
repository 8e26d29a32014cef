#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "ionfilm/params.hpp"

namespace ionfilm {

/// Solved dimensionless growth rate with convergence metadata.
struct DispersionRoot {
    double Q = 0;
    double R = 0;             ///< real growth rate at the root
    double residual = 0;      ///< dispersion relation value at the root
    std::pair<double, double> bracket{0, 0}; ///< final bracketing interval
    int iterations = 0;
    bool converged = false;
    bool multiple_roots = false; ///< more than one verified root was bracketed
    std::vector<double> all_roots; ///< every verified root, sorted by |R|
};

/// sinh(y) - y evaluated without cancellation for small y.
double sinh_minus_linear(double y);

/// Left side of the implicit growth-rate relation at real R.
///
/// U and V are evaluated in the rational-in-R form, which is regular at
/// R = 0 (continuously extending U = V = 1 there) and exposes the genuine
/// pole at R = -3*Gamma/(3*Gamma + 7) explicitly. For Q > 300 the returned
/// value carries a 4*exp(-2Q) scale to stay inside double range; roots and
/// signs are unchanged.
///
/// Pre: R != -1 and R not at the U,V pole.
double dispersion_lhs(double R, const DimensionlessState& s);

/// Complex-R overload for diagnostic sweeps off the real axis.
std::complex<double> dispersion_lhs(std::complex<double> R, const DimensionlessState& s);

/// Magnitude scale of the largest term of the relation at R; residuals are
/// judged relative to this.
double dispersion_term_scale(double R, const DimensionlessState& s);

/// Location of the U,V pole on the negative R axis, -3*Gamma/(3*Gamma + 7),
/// or -1 when Gamma is infinite (no interior pole).
double dispersion_pole(const DimensionlessState& s);

/// Find the real growth-rate root of smallest |R| in (-1, 10].
///
/// The scan expands from R = 0 through the interval up to the pole, then
/// covers the remaining segment down to -1 and the positive guard segment,
/// bracketing every sign change. Each bracket is refined by a
/// bisection/secant hybrid and verified against the residual scale; poles
/// masquerading as sign changes are rejected. With several verified roots
/// the smallest-|R| one is returned and multiple_roots is set.
///
/// Pre: Q > 0, D >= 0, C >= 0. Throws convergence_error when no verified
/// root exists in the search interval.
DispersionRoot solve_growth_rate(const DimensionlessState& s);

/// Neutral-stability boundary D*(Q) = 2C (1 - sinh(2Q)/(2Q)), continuously
/// extended by D*(0) = 0. Strictly negative and decreasing for Q > 0.
double neutral_boundary(double Q, double C);

/// Long-wavelength expansion R = -D Q^2 / 2 - 2 C Q^4 / 3 (valid for Q << 1).
double long_wavelength_growth(const DimensionlessState& s);

/// Closed-form growth rate of the purely viscous, incompressible film,
/// sigma(k) = -[6 f A Q^2 + (k gamma / 2 eta)(sinh 2Q - 2Q)]
///            / [1 + 2 Q^2 + cosh 2Q],  Q = h k.
/// With f = 0 this is the classic viscous-leveling rate.
double viscous_growth(const MaterialParams& p, double k);

} // namespace ionfilm
