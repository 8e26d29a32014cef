#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ionfilm/params.hpp"

namespace ionfilm {

/// Basis trajectories of the linearized mode ODE system, integrated from the
/// substrate with no-slip initial data. Kept deliberately independent of the
/// closed-form mode shape: only the primitive coefficient definitions and the
/// traction boundary rows are used anywhere in this module.
struct IntegrationResult {
    using state = std::array<std::complex<double>, 4>; // (u, u', w, w')
    state end1{}, end2{};                  ///< both basis solutions at z = h
    std::vector<double> z;                 ///< profile sample locations
    std::vector<std::array<std::complex<double>, 2>> profile1; ///< (u, w) of basis 1
    std::vector<std::array<std::complex<double>, 2>> profile2; ///< (u, w) of basis 2
    double cond_estimate = 1.0;            ///< basis-pair conditioning (Gram ratio)
    int reorthogonalizations = 0;
};

/// Fixed-step 4th-order integration of the coupled mode equations
/// u'' = N w' + K u, w'' = M u' + L w from z = 0 to z = h, with the two
/// independent slopes (u', w')(0) in {(1,0), (0,1)} and u(0) = w(0) = 0.
///
/// When the basis pair loses independence (conditioning above 1e8) the pair
/// is re-orthonormalized in place; stored profile samples are transformed
/// consistently so any final linear combination remains valid over [0, h].
///
/// Pre: n_steps >= 100, sigma != 0, finite bulk modulus.
/// Throws integration_error if the state becomes non-finite.
IntegrationResult integrate_modes(const MaterialParams& p, double k, double sigma, int n_steps);

struct ShootingOptions {
    int n_steps = 2000;
    double tol = 1e-10;     ///< relative kinematic-residual tolerance
};

struct ShootingResult {
    double sigma = 0;            ///< converged growth rate [1/s]
    double basis_mismatch = 1;   ///< condition number of the 2x2 boundary system
    std::vector<double> z;       ///< profile sample locations
    std::vector<std::complex<double>> u, w; ///< converged mode shape samples
    bool converged = false;
    int iterations = 0;
    double residual = 0;         ///< sigma - Re(w(h)) at the returned root
};

/// Locate the growth rate by shooting: for trial sigma the two traction
/// conditions at the free surface fix the basis weights, and the kinematic
/// mismatch sigma - w(h) is driven to zero by an expanding bracket followed
/// by a secant/bisection hybrid. The stable side is searched first; a
/// positive-side guard follows so a genuine instability is reported rather
/// than missed.
///
/// The incompressible sentinel (infinite bulk modulus) switches to the
/// equivalent fourth-order single-variable form of the same primitive
/// equations; an infinite shear modulus is handled transparently.
///
/// Pre: k > 0. Throws convergence_error when no root is bracketed (including
/// the unforced f*A = gamma = 0 degenerate case) and singular_error for an
/// ill-conditioned boundary system at the reported root.
ShootingResult shoot_growth_rate(const MaterialParams& p, double k,
                                 const ShootingOptions& opts = {});

} // namespace ionfilm
