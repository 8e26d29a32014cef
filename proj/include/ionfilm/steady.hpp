#pragma once

#include "ionfilm/params.hpp"

namespace ionfilm {

/// Flat-film steady state under normal-incidence irradiation.
///
/// The film is compressively stressed laterally and compressively strained
/// vertically; the steady velocity field is identically zero. The stress
/// depends only on the viscosity and the beam forcing, not on the elastic
/// moduli.
struct SteadyState {
    SymTensor3 stress;     ///< [Pa], diag(-1,-1,0) * 6*eta*f*A
    SymTensor3 strain;     ///< dimensionless, diag(0,0,-1) * 4*(eta/B)*f*A
    double stress_trace;   ///< [Pa]
    double strain_trace;   ///< dimensionless
    bool incompressible;   ///< strain reported as exactly zero (B infinite)
};

/// Solve the steady balance for a flat film.
SteadyState steady_state(const MaterialParams& p);

/// measured_stress / |computed lateral stress|. Pre: measured_stress > 0.
/// Throws config_error if the computed stress is zero.
double compare_to_measurement(const SteadyState& s, double measured_stress);

} // namespace ionfilm
