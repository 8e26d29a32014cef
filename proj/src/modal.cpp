#include "ionfilm/modal.hpp"

#include <cmath>
#include <sstream>

namespace ionfilm {

namespace {

constexpr double kScaledHyperbolicsAbove = 300.0; // switch to exp-scaled forms

struct Hyp {
    double ch, sh;   // cosh(Q), sinh(Q), possibly scaled by exp(-Q)
    double scale_log; // 0 for plain values, Q when scaled
};

Hyp hyperbolics(double Q) {
    if (Q > kScaledHyperbolicsAbove) {
        const double e2 = std::exp(-2.0 * Q);
        return {0.5 * (1.0 + e2), 0.5 * (1.0 - e2), Q};
    }
    return {std::cosh(Q), std::sinh(Q), 0.0};
}

cplx alpha_of(const MaterialParams& p, double sigma) {
    const double denom = p.viscous_shear() ? 1.0 : 1.0 + p.eta * sigma / p.shear_modulus;
    if (denom == 0.0 || std::abs(denom) < 1e-300) {
        throw singular_error("Maxwell resonance: sigma = -G/eta, alpha diverges");
    }
    return cplx(2.0 * p.eta / denom, 0.0);
}

cplx beta_of(const MaterialParams& p, double sigma) {
    if (sigma == 0.0) {
        throw singular_error("sigma = 0: beta = B/sigma diverges; use the neutral-limit path");
    }
    if (p.incompressible()) {
        throw singular_error(
            "bulk modulus is infinite: modal coefficients degenerate, use viscous_growth");
    }
    return cplx(p.bulk_modulus / sigma, 0.0);
}

/// Values of the two sinh-amplitude basis fields and their z-derivatives at
/// z = h, linear in the supplied (ch, sh) pair so exp-scaled inputs yield
/// exp-scaled outputs.
struct BasisAtTop {
    cplx u_b, w_b, up_b, wp_b; // field with (b, d) = (1, 0)
    cplx u_d, w_d, up_d, wp_d; // field with (b, d) = (0, 1)
};

BasisAtTop basis_at_top(cplx U, double k, double Q, const Hyp& hy) {
    const cplx i(0.0, 1.0);
    const double ch = hy.ch, sh = hy.sh;
    BasisAtTop t;
    t.u_b = sh + U * Q * ch;
    t.w_b = -i * U * Q * sh;
    t.up_b = k * ((1.0 + U) * ch + U * Q * sh);
    t.wp_b = -i * k * U * (sh + Q * ch);
    t.u_d = -i * U * Q * sh;
    t.w_d = sh - U * Q * ch;
    t.up_d = -i * k * U * (sh + Q * ch);
    t.wp_d = k * ((1.0 - U) * ch - U * Q * sh);
    return t;
}

} // namespace

cplx VelocityField::u(double z) const {
    const cplx i(0.0, 1.0);
    const double ch = std::cosh(k * z), sh = std::sinh(k * z);
    return b * sh + U * (k * z) * (b * ch - i * d * sh);
}

cplx VelocityField::w(double z) const {
    const cplx i(0.0, 1.0);
    const double ch = std::cosh(k * z), sh = std::sinh(k * z);
    return d * sh + U * (k * z) * (-d * ch - i * b * sh);
}

cplx VelocityField::u_prime(double z) const {
    const cplx i(0.0, 1.0);
    const double ch = std::cosh(k * z), sh = std::sinh(k * z);
    return b * k * ch + U * k * (b * ch - i * d * sh) + U * k * (k * z) * (b * sh - i * d * ch);
}

cplx VelocityField::w_prime(double z) const {
    const cplx i(0.0, 1.0);
    const double ch = std::cosh(k * z), sh = std::sinh(k * z);
    return d * k * ch + U * k * (-d * ch - i * b * sh) + U * k * (k * z) * (-d * sh - i * b * ch);
}

ModalCoefficients modal_coefficients(const MaterialParams& p, double k, double sigma) {
    ModalCoefficients c;
    c.alpha = alpha_of(p, sigma);
    c.beta = beta_of(p, sigma);
    c.k = k;
    c.Q = k * p.thickness;

    const cplx al = c.alpha, be = c.beta;
    const cplx d4 = 4.0 * al + 6.0 * be;
    const cplx d7 = 7.0 * al + 6.0 * be;
    const double mag = std::abs(al) + std::abs(be);
    if (std::abs(d4) < 1e-14 * mag) {
        throw singular_error("coefficient resonance: 4*alpha + 6*beta ~ 0");
    }
    if (std::abs(d7) < 1e-14 * mag) {
        throw singular_error("secular-coupling resonance: 7*alpha + 6*beta ~ 0");
    }
    c.U = (al + 6.0 * be) / d7;
    c.V = d4 / d7;

    if (k == 0.0) {
        // Uniform mode: no lateral structure, no flow.
        c.K = c.L = c.M = c.N = 0.0;
        c.b = c.d = 0.0;
        c.Delta = 0.0;
        return c;
    }

    const cplx i(0.0, 1.0);
    c.K = d4 / (3.0 * al) * (k * k);
    c.L = 3.0 * al / d4 * (k * k);
    c.M = -i * (al + 6.0 * be) / d4 * k;
    c.N = -i * (al + 6.0 * be) / (3.0 * al) * k;

    const double Q = c.Q;
    const Hyp hy = hyperbolics(Q);
    const double ch = hy.ch, sh = hy.sh;
    // P carries exp(2Q) when unscaled; with scaled hyperbolics the algebraic
    // terms pick up the balancing exp(-2Q) factor instead.
    const cplx P = (hy.scale_log > 0.0)
                       ? (c.V * c.V + c.U * c.U * (Q * Q)) * std::exp(-2.0 * Q) + c.U * sh * sh
                       : c.V * c.V + c.U * sh * sh + c.U * c.U * (Q * Q);
    c.Delta = (hy.scale_log > 0.0) ? (al * k) * (al * k) * P * std::exp(2.0 * Q)
                                   : (al * k) * (al * k) * P;

    const cplx F1 = 6.0 * p.flux * p.strain_per_dose * p.eta * k; // shear-traction forcing
    const cplx F2 = p.surface_energy * k * k;                     // capillary forcing

    const cplx num_b = F1 * (c.V * ch - c.U * Q * sh) + F2 * (-(c.V - c.U) * sh + c.U * Q * ch);
    const cplx num_d = F1 * (-(c.V - c.U) * sh - c.U * Q * ch) + F2 * (c.V * ch + c.U * Q * sh);
    // b = -i*alpha*k*num_b/Delta, with num and Delta sharing the same scaling.
    const cplx denom = (al * k) * (al * k) * P;
    const double rescale = (hy.scale_log > 0.0) ? std::exp(-hy.scale_log) : 1.0;
    c.b = -i * al * k * num_b * rescale / denom;
    c.d = -al * k * num_d * rescale / denom;
    return c;
}

VelocityField velocity_field(const ModalCoefficients& c, const MaterialParams& /*p*/, double k) {
    return VelocityField{c.b, c.d, c.U, k};
}

BoundarySystem boundary_system(const MaterialParams& p, double k, double sigma) {
    const cplx al = alpha_of(p, sigma);
    const cplx be = beta_of(p, sigma);
    const cplx d7 = 7.0 * al + 6.0 * be;
    if (std::abs(d7) < 1e-14 * (std::abs(al) + std::abs(be))) {
        throw singular_error("secular-coupling resonance: 7*alpha + 6*beta ~ 0");
    }
    const cplx U = (al + 6.0 * be) / d7;

    const double h = p.thickness;
    const double Q = k * h;
    const Hyp hy = hyperbolics(Q);
    const BasisAtTop t = basis_at_top(U, k, Q, hy);
    const cplx i(0.0, 1.0);

    // Shear and normal traction continuity at the perturbed free surface,
    // applied to each basis field. Scaled hyperbolics multiply a whole row,
    // so the right-hand side carries the same factor.
    const double row_scale = (hy.scale_log > 0.0) ? std::exp(-hy.scale_log) : 1.0;
    BoundarySystem bs;
    bs.a11 = al / 2.0 * (i * k * t.w_b + t.up_b);
    bs.a12 = al / 2.0 * (i * k * t.w_d + t.up_d);
    bs.a21 = al / 3.0 * (-i * k * t.u_b + 2.0 * t.wp_b) + be * (i * k * t.u_b + t.wp_b);
    bs.a22 = al / 3.0 * (-i * k * t.u_d + 2.0 * t.wp_d) + be * (i * k * t.u_d + t.wp_d);
    bs.rhs1 = -6.0 * p.flux * p.strain_per_dose * p.eta * i * k * row_scale;
    bs.rhs2 = -p.surface_energy * k * k * row_scale;
    return bs;
}

std::pair<cplx, cplx> solve_boundary_direct(const BoundarySystem& bs) {
    const cplx det = bs.a11 * bs.a22 - bs.a12 * bs.a21;
    const double scale = (std::abs(bs.a11) + std::abs(bs.a12)) * (std::abs(bs.a21) + std::abs(bs.a22));
    if (std::abs(det) <= 1e-15 * scale) {
        throw singular_error("boundary system is singular (Delta ~ 0)");
    }
    const cplx b = (bs.rhs1 * bs.a22 - bs.a12 * bs.rhs2) / det;
    const cplx d = (bs.a11 * bs.rhs2 - bs.rhs1 * bs.a21) / det;
    return {b, d};
}

cplx kinematic_residual(const MaterialParams& p, double k, double sigma) {
    const double Q = k * p.thickness;
    std::pair<cplx, cplx> bd;
    try {
        bd = solve_boundary_direct(boundary_system(p, k, sigma));
    } catch (const singular_error& e) {
        std::ostringstream os;
        os << e.what() << " [Q=" << Q << ", sigma=" << sigma << ", k=" << k << "]";
        throw singular_error(os.str());
    }

    const cplx al = alpha_of(p, sigma);
    const cplx be = beta_of(p, sigma);
    const cplx U = (al + 6.0 * be) / (7.0 * al + 6.0 * be);

    // w(h) evaluated the same scaled way the boundary rows were built, so the
    // amplitude scaling cancels identically.
    const Hyp hy = hyperbolics(Q);
    const cplx i(0.0, 1.0);
    const cplx wh = (bd.second * hy.sh + U * Q * (-bd.second * hy.ch - i * bd.first * hy.sh)) *
                    ((hy.scale_log > 0.0) ? std::exp(hy.scale_log) : 1.0);
    return cplx(sigma, 0.0) - wh;
}

} // namespace ionfilm
