#include "ionfilm/steady.hpp"

namespace ionfilm {

SteadyState steady_state(const MaterialParams& p) {
    SteadyState s{};
    const double t = 6.0 * p.eta * p.flux * p.strain_per_dose;
    s.stress = SymTensor3{-t, -t, 0.0, 0.0, 0.0, 0.0};
    s.stress_trace = s.stress.xx + s.stress.yy + s.stress.zz;

    s.incompressible = p.incompressible();
    if (s.incompressible) {
        s.strain = SymTensor3{};
        s.strain_trace = 0.0;
    } else {
        const double e = 4.0 * (p.eta / p.bulk_modulus) * p.flux * p.strain_per_dose;
        s.strain = SymTensor3{0.0, 0.0, -e, 0.0, 0.0, 0.0};
        s.strain_trace = s.strain.zz;
    }
    return s;
}

double compare_to_measurement(const SteadyState& s, double measured_stress) {
    if (!(measured_stress > 0.0)) {
        throw config_error("measured stress must be > 0");
    }
    const double computed = std::abs(s.stress.xx);
    if (computed == 0.0) {
        throw config_error("computed steady stress is zero (no beam forcing); ratio undefined");
    }
    return measured_stress / computed;
}

} // namespace ionfilm
