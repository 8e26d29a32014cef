#pragma once

#include <complex>

#include "ionfilm/params.hpp"

namespace ionfilm {

using cplx = std::complex<double>;

/// Coefficients of the linearized perturbation problem at one (sigma, k).
///
/// alpha = 2*eta / (1 + eta*sigma/G) combines viscous and elastic response;
/// beta = B/sigma carries the compressible part. K, L (1/m^2) and the purely
/// imaginary M, N (1/m) are the coupled-mode ODE coefficients; U, V are the
/// dimensionless boundary groups; Delta is the determinant of the 2x2
/// free-surface traction system; b, d are the velocity amplitude
/// coefficients of the closed-form mode shape.
struct ModalCoefficients {
    cplx alpha, beta;
    cplx K, L, M, N;
    cplx U, V;
    cplx Delta;
    cplx b, d;
    double k = 0;
    double Q = 0; ///< k * thickness
};

/// Closed-form mode shape with no-slip at z = 0 baked in (the cosh-amplitude
/// pair vanishes). u is the lateral, w the vertical velocity perturbation.
/// The kz-proportional secular terms carry the coupling factor U.
struct VelocityField {
    cplx b, d, U;
    double k = 0;

    cplx u(double z) const;
    cplx w(double z) const;
    cplx u_prime(double z) const;
    cplx w_prime(double z) const;
};

/// 2x2 linear system expressing the linearized free-surface tractions acting
/// on the sinh-amplitude pair (b, d): A * (b, d)^T = rhs.
struct BoundarySystem {
    cplx a11, a12, a21, a22;
    cplx rhs1, rhs2;
};

/// Evaluate all modal coefficients. b and d come from the closed-form
/// expressions (checked elsewhere against the direct linear solve).
///
/// Pre: sigma != 0 (use the neutral-limit path), sigma != -G/eta (Maxwell
/// resonance), finite bulk modulus (use viscous_growth for the sentinel).
ModalCoefficients modal_coefficients(const MaterialParams& p, double k, double sigma);

/// Mode shape built from already-computed coefficients.
VelocityField velocity_field(const ModalCoefficients& c, const MaterialParams& p, double k);

/// Assemble the free-surface traction system for the sinh-amplitude pair.
BoundarySystem boundary_system(const MaterialParams& p, double k, double sigma);

/// Direct 2x2 solve of the boundary system; the authoritative path for (b, d).
/// Throws singular_error when the determinant vanishes.
std::pair<cplx, cplx> solve_boundary_direct(const BoundarySystem& bs);

/// sigma - w(h) with (b, d) from the direct boundary solve. A zero of this
/// residual in sigma is a dispersion-relation solution.
cplx kinematic_residual(const MaterialParams& p, double k, double sigma);

} // namespace ionfilm
