#include "ionfilm/params.hpp"

#include <string>

namespace ionfilm {

namespace {

void require_positive_finite(double v, const char* name) {
    if (!(v > 0.0) || std::isinf(v) || std::isnan(v)) {
        throw config_error(std::string(name) + " must be strictly positive and finite");
    }
}

void require_positive_modulus(double v, const char* name) {
    if (std::isinf(v) && v > 0.0) return; // sentinel for the limit path
    require_positive_finite(v, name);
}

void require_nonnegative_finite(double v, const char* name) {
    if (!(v >= 0.0) || std::isinf(v)) {
        throw config_error(std::string(name) + " must be finite and >= 0");
    }
}

} // namespace

void MaterialParams::validate() const {
    require_positive_finite(eta, "eta");
    require_positive_modulus(shear_modulus, "shear_modulus");
    require_positive_modulus(bulk_modulus, "bulk_modulus");
    // forcing terms may be switched off to study the unforced film
    require_nonnegative_finite(surface_energy, "surface_energy");
    require_nonnegative_finite(flux, "flux");
    require_nonnegative_finite(strain_per_dose, "strain_per_dose");
    require_positive_finite(thickness, "thickness");
}

DimensionlessState to_dimensionless(const MaterialParams& p, double k, double sigma) {
    if (k < 0.0) throw config_error("wavenumber k must be >= 0");
    DimensionlessState s;
    s.Q = p.thickness * k;
    if (p.viscous_shear()) {
        // All shear-scaled groups collapse; flag so callers can dispatch to
        // the closed-form viscous path with the dimensional quantities.
        s.R = 0.0;
        s.D = 0.0;
        s.C = 0.0;
        s.Gamma = infinite_modulus;
        s.viscous_limit = true;
        return s;
    }
    s.R = p.eta * sigma / p.shear_modulus;
    s.D = 6.0 * p.flux * p.strain_per_dose * p.eta / p.shear_modulus;
    s.C = p.surface_energy / (2.0 * p.shear_modulus * p.thickness);
    s.Gamma = p.bulk_modulus / p.shear_modulus; // inf if incompressible
    return s;
}

double growth_rate_dimensional(const MaterialParams& p, double R) {
    if (p.viscous_shear()) {
        throw config_error(
            "shear modulus is infinite: the R mapping is degenerate, use the "
            "viscous-limit growth rate instead");
    }
    return R * p.shear_modulus / p.eta;
}

} // namespace ionfilm
