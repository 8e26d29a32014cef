#pragma once

#include <cmath>
#include <limits>

#include "ionfilm/errors.hpp"

namespace ionfilm {

/// Sentinel used for the purely viscous (infinite shear modulus) and
/// incompressible (infinite bulk modulus) limits.
inline constexpr double infinite_modulus = std::numeric_limits<double>::infinity();

/// Physical film and beam constants, SI units throughout.
struct MaterialParams {
    double eta;             ///< dynamic viscosity [Pa s]
    double shear_modulus;   ///< [Pa], may be infinite_modulus
    double bulk_modulus;    ///< [Pa], may be infinite_modulus
    double surface_energy;  ///< [N/m]
    double flux;            ///< ion flux [1/(m^2 s)]
    double strain_per_dose; ///< strain imparted per ion [m^2]
    double thickness;       ///< unperturbed film thickness [m]

    bool viscous_shear() const { return std::isinf(shear_modulus); }
    bool incompressible() const { return std::isinf(bulk_modulus); }

    /// Throws config_error unless every field is strictly positive and finite
    /// (the two moduli may carry the infinite sentinel).
    void validate() const;
};

/// 3x3 symmetric tensor; Pa for stress, dimensionless for strain.
struct SymTensor3 {
    double xx = 0, yy = 0, zz = 0;
    double xy = 0, xz = 0, yz = 0;

    double trace() const { return xx + yy + zz; }

    SymTensor3 deviator() const {
        const double m = trace() / 3.0;
        return {xx - m, yy - m, zz - m, xy, xz, yz};
    }

    double frobenius_norm() const {
        return std::sqrt(xx * xx + yy * yy + zz * zz +
                         2.0 * (xy * xy + xz * xz + yz * yz));
    }

    SymTensor3 operator*(double s) const { return {xx * s, yy * s, zz * s, xy * s, xz * s, yz * s}; }
    SymTensor3 operator+(const SymTensor3& o) const {
        return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, xz + o.xz, yz + o.yz};
    }
    SymTensor3 operator-(const SymTensor3& o) const {
        return {xx - o.xx, yy - o.yy, zz - o.zz, xy - o.xy, xz - o.xz, yz - o.yz};
    }
};

/// Reduced parameter set: growth rate R, wavenumber Q, Deborah number D,
/// capillary number C, and the compressibility ratio Gamma = B/G.
///
/// The set {R, Q, D, C} alone is not closed: the boundary-layer groups U, V
/// depend on beta/alpha = Gamma (1+R) / (2R), so Gamma is carried explicitly.
struct DimensionlessState {
    double R = 0;      ///< eta*sigma/G
    double Q = 0;      ///< h*k
    double D = 0;      ///< 6*f*A*eta/G
    double C = 0;      ///< gamma/(2*G*h)
    double Gamma = 1;  ///< B/G, may be infinite_modulus

    /// Set when the shear modulus carried the infinite sentinel: D, C, R all
    /// collapse to zero and callers should use the closed-form viscous path.
    bool viscous_limit = false;
};

/// Map dimensional material constants plus (k, sigma) to the reduced set.
/// Pre: k >= 0.
DimensionlessState to_dimensionless(const MaterialParams& p, double k, double sigma);

/// sigma = R * G / eta. Exact inverse of the R mapping.
/// Throws config_error for the infinite-shear sentinel (use viscous_growth).
double growth_rate_dimensional(const MaterialParams& p, double R);

} // namespace ionfilm
