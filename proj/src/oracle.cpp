#include "ionfilm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace ionfilm {

namespace {

using C = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Coeffs {
    C alpha, beta;
    C K, L, M, N;
};

Coeffs primitive_coefficients(const MaterialParams& p, double k, double sigma) {
    if (sigma == 0.0) {
        throw singular_error("sigma = 0: mode coefficients diverge");
    }
    const double adenom = p.viscous_shear() ? 1.0 : 1.0 + p.eta * sigma / p.shear_modulus;
    if (adenom == 0.0) {
        throw singular_error("sigma = -G/eta: alpha diverges");
    }
    Coeffs c;
    c.alpha = C(2.0 * p.eta / adenom, 0.0);
    c.beta = C(p.bulk_modulus / sigma, 0.0);
    const C d4 = 4.0 * c.alpha + 6.0 * c.beta;
    if (std::abs(d4) < 1e-13 * (std::abs(c.alpha) + std::abs(c.beta))) {
        throw singular_error("coefficient resonance: 4*alpha + 6*beta ~ 0");
    }
    const C i(0.0, 1.0);
    c.K = d4 / (3.0 * c.alpha) * (k * k);
    c.L = 3.0 * c.alpha / d4 * (k * k);
    c.M = -i * (c.alpha + 6.0 * c.beta) / d4 * k;
    c.N = -i * (c.alpha + 6.0 * c.beta) / (3.0 * c.alpha) * k;
    return c;
}

/// Relative roundoff floor of one residual evaluation: the second-derivative
/// rows sum terms that cancel down by the coefficient magnitude ratio.
double noise_estimate(const MaterialParams& p, double k, double sigma) {
    const double adenom = p.viscous_shear() ? 1.0 : std::abs(1.0 + p.eta * sigma / p.shear_modulus);
    if (adenom == 0.0) return std::numeric_limits<double>::infinity();
    const double alpha = 2.0 * p.eta / adenom;
    const double chi =
        std::isinf(p.bulk_modulus) ? 1.0 : 1.0 + 2.0 * std::abs(p.bulk_modulus / sigma) / alpha;
    const double Q = k * p.thickness;
    return kEps * chi * std::max(Q, 1.0);
}

struct Gram {
    double n1, n2, cond;
};

Gram gram_of(const IntegrationResult::state& a, const IntegrationResult::state& b) {
    double g11 = 0, g22 = 0;
    C g12(0, 0);
    for (int i = 0; i < 4; ++i) {
        g11 += std::norm(a[i]);
        g22 += std::norm(b[i]);
        g12 += std::conj(a[i]) * b[i];
    }
    const double tr = g11 + g22;
    const double det = std::max(g11 * g22 - std::norm(g12), 0.0);
    const double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
    const double lmax = tr / 2.0 + disc;
    const double lmin = std::max(tr / 2.0 - disc, lmax * 1e-32);
    return {std::sqrt(g11), std::sqrt(g22), std::sqrt(lmax / lmin)};
}

} // namespace

IntegrationResult integrate_modes(const MaterialParams& p, double k, double sigma, int n_steps) {
    if (n_steps < 100) throw config_error("integrate_modes requires n_steps >= 100");
    if (p.incompressible()) {
        throw config_error(
            "infinite bulk modulus: the coupled second-order form degenerates; "
            "shoot_growth_rate handles this limit internally");
    }
    const Coeffs c = primitive_coefficients(p, k, sigma);
    const double h = p.thickness;
    const double dz = h / n_steps;

    using state = IntegrationResult::state;
    const auto rhs = [&c](const state& y) -> state {
        return {y[1], c.K * y[0] + c.N * y[3], y[3], c.M * y[1] + c.L * y[2]};
    };
    const auto rk4_step = [&](state& y) {
        const state k1 = rhs(y);
        state t;
        for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * dz * k1[i];
        const state k2 = rhs(t);
        for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * dz * k2[i];
        const state k3 = rhs(t);
        for (int i = 0; i < 4; ++i) t[i] = y[i] + dz * k3[i];
        const state k4 = rhs(t);
        for (int i = 0; i < 4; ++i) {
            y[i] += dz / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    };

    IntegrationResult out;
    state y1{C(0), C(1), C(0), C(0)};
    state y2{C(0), C(0), C(0), C(1)};

    const int sample_every = std::max(n_steps / 100, 1);
    const auto sample = [&](int step) {
        out.z.push_back(step * dz);
        out.profile1.push_back({y1[0], y1[2]});
        out.profile2.push_back({y2[0], y2[2]});
    };
    sample(0);

    const int check_every = 16;
    for (int step = 1; step <= n_steps; ++step) {
        rk4_step(y1);
        rk4_step(y2);
        if (step % check_every == 0 || step == n_steps) {
            bool finite = true;
            for (int i = 0; i < 4; ++i) {
                finite = finite && std::isfinite(y1[i].real()) && std::isfinite(y1[i].imag()) &&
                         std::isfinite(y2[i].real()) && std::isfinite(y2[i].imag());
            }
            if (!finite) {
                std::ostringstream os;
                os << "mode integration overflowed at step " << step << "/" << n_steps
                   << " (z = " << step * dz << ", sigma = " << sigma << ", k = " << k << ")";
                throw integration_error(os.str());
            }
            const Gram g = gram_of(y1, y2);
            out.cond_estimate = std::max(out.cond_estimate, g.cond);
            if ((g.cond > 1e8 || std::max(g.n1, g.n2) > 1e120) && step != n_steps) {
                // Gram-Schmidt in place; transform stored samples the same way
                // so a final combination of (y1, y2) stays valid on [0, h].
                const double inv1 = 1.0 / g.n1;
                for (auto& v : y1) v *= inv1;
                C ip(0, 0);
                for (int i = 0; i < 4; ++i) ip += std::conj(y1[i]) * y2[i];
                for (int i = 0; i < 4; ++i) y2[i] -= ip * y1[i];
                double n2 = 0;
                for (const auto& v : y2) n2 += std::norm(v);
                n2 = std::sqrt(std::max(n2, 1e-300));
                const double inv2 = 1.0 / n2;
                for (auto& v : y2) v *= inv2;
                for (size_t s = 0; s < out.profile1.size(); ++s) {
                    out.profile1[s][0] *= inv1;
                    out.profile1[s][1] *= inv1;
                    out.profile2[s][0] = (out.profile2[s][0] - ip * out.profile1[s][0]) * inv2;
                    out.profile2[s][1] = (out.profile2[s][1] - ip * out.profile1[s][1]) * inv2;
                }
                ++out.reorthogonalizations;
            }
        }
        if (step % sample_every == 0) sample(step);
    }
    out.end1 = y1;
    out.end2 = y2;
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// trial evaluation of the kinematic mismatch at one sigma
// ---------------------------------------------------------------------------

struct TrialEval {
    double g = 0;           // sigma - Re(w(h))
    double cond2x2 = 0;     // boundary-system condition estimate
    C c1{0, 0}, c2{0, 0};   // basis weights
};

/// Compressible path: traction rows applied to the integrated basis pair.
std::optional<TrialEval> trial_compressible(const MaterialParams& p, double k, double sigma,
                                            int n_steps, IntegrationResult* keep) {
    if (noise_estimate(p, k, sigma) > 1e-4) return std::nullopt; // below roundoff floor
    IntegrationResult ir;
    try {
        ir = integrate_modes(p, k, sigma, n_steps);
    } catch (const error&) {
        return std::nullopt;
    }
    const Coeffs c = primitive_coefficients(p, k, sigma);
    const C i(0.0, 1.0);
    const auto rows = [&](const IntegrationResult::state& y) -> std::pair<C, C> {
        const C shear = c.alpha / 2.0 * (i * k * y[2] + y[1]);
        const C normal = c.alpha / 3.0 * (-i * k * y[0] + 2.0 * y[3]) +
                         c.beta * (i * k * y[0] + y[3]);
        return {shear, normal};
    };
    const auto [a11, a21] = rows(ir.end1);
    const auto [a12, a22] = rows(ir.end2);
    const C det = a11 * a22 - a12 * a21;
    const double c1n = std::abs(a11) + std::abs(a21);
    const double c2n = std::abs(a12) + std::abs(a22);
    if (std::abs(det) == 0.0) return std::nullopt;
    TrialEval ev;
    ev.cond2x2 = c1n * c2n / std::abs(det);
    if (ev.cond2x2 > 1e12) return std::nullopt;

    const C r1 = -6.0 * p.flux * p.strain_per_dose * p.eta * i * k;
    const C r2 = -p.surface_energy * k * k;
    ev.c1 = (r1 * a22 - a12 * r2) / det;
    ev.c2 = (a11 * r2 - r1 * a21) / det;
    const C wh = ev.c1 * ir.end1[2] + ev.c2 * ir.end2[2];
    ev.g = sigma - wh.real();
    if (!std::isfinite(ev.g)) return std::nullopt;
    if (keep) *keep = std::move(ir);
    return ev;
}

/// Incompressible sentinel: the same primitive balance expressed through the
/// vertical velocity alone, w'''' = 2 k^2 w'' - k^4 w, with u = (i/k) w' and
/// the no-slip data w(0) = w'(0) = 0.
struct BiharmonicBasis {
    std::array<C, 4> end1{}, end2{}; // (w, w', w'', w''')
    std::vector<double> z;
    std::vector<std::array<C, 2>> p1, p2; // (w, w') samples
};

BiharmonicBasis integrate_biharmonic(double h, double k, int n_steps) {
    using state = std::array<C, 4>;
    const double dz = h / n_steps;
    const double k2 = k * k;
    const auto rhs = [k2](const state& y) -> state {
        return {y[1], y[2], y[3], 2.0 * k2 * y[2] - k2 * k2 * y[0]};
    };
    const auto rk4_step = [&](state& y) {
        const state k1 = rhs(y);
        state t;
        for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * dz * k1[i];
        const state k2s = rhs(t);
        for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * dz * k2s[i];
        const state k3 = rhs(t);
        for (int i = 0; i < 4; ++i) t[i] = y[i] + dz * k3[i];
        const state k4 = rhs(t);
        for (int i = 0; i < 4; ++i) y[i] += dz / 6.0 * (k1[i] + 2.0 * k2s[i] + 2.0 * k3[i] + k4[i]);
    };
    BiharmonicBasis out;
    state y1{C(0), C(0), C(1), C(0)};
    state y2{C(0), C(0), C(0), C(1)};
    const int sample_every = std::max(n_steps / 100, 1);
    out.z.push_back(0.0);
    out.p1.push_back({y1[0], y1[1]});
    out.p2.push_back({y2[0], y2[1]});
    for (int step = 1; step <= n_steps; ++step) {
        rk4_step(y1);
        rk4_step(y2);
        if (step % sample_every == 0) {
            out.z.push_back(step * dz);
            out.p1.push_back({y1[0], y1[1]});
            out.p2.push_back({y2[0], y2[1]});
        }
    }
    out.end1 = y1;
    out.end2 = y2;
    return out;
}

std::optional<TrialEval> trial_incompressible(const MaterialParams& p, double k, double sigma,
                                              const BiharmonicBasis& bb) {
    const double adenom = p.viscous_shear() ? 1.0 : 1.0 + p.eta * sigma / p.shear_modulus;
    if (adenom == 0.0) return std::nullopt;
    const C alpha(2.0 * p.eta / adenom, 0.0);
    const C i(0.0, 1.0);
    // shear traction: (i alpha / 2k)(w'' + k^2 w); normal traction:
    // (3 alpha / 2) w' - (alpha / 2k^2) w'''
    const auto rows = [&](const std::array<C, 4>& y) -> std::pair<C, C> {
        return {i * alpha / (2.0 * k) * (y[2] + k * k * y[0]),
                1.5 * alpha * y[1] - alpha / (2.0 * k * k) * y[3]};
    };
    const auto [a11, a21] = rows(bb.end1);
    const auto [a12, a22] = rows(bb.end2);
    const C det = a11 * a22 - a12 * a21;
    if (std::abs(det) == 0.0) return std::nullopt;
    TrialEval ev;
    ev.cond2x2 = (std::abs(a11) + std::abs(a21)) * (std::abs(a12) + std::abs(a22)) / std::abs(det);
    if (ev.cond2x2 > 1e12) return std::nullopt;
    const C r1 = -6.0 * p.flux * p.strain_per_dose * p.eta * i * k;
    const C r2 = -p.surface_energy * k * k;
    ev.c1 = (r1 * a22 - a12 * r2) / det;
    ev.c2 = (a11 * r2 - r1 * a21) / det;
    const C wh = ev.c1 * bb.end1[0] + ev.c2 * bb.end2[0];
    ev.g = sigma - wh.real();
    if (!std::isfinite(ev.g)) return std::nullopt;
    return ev;
}

} // namespace

ShootingResult shoot_growth_rate(const MaterialParams& p, double k, const ShootingOptions& opts) {
    if (!(k > 0.0)) throw config_error("shoot_growth_rate requires k > 0");
    if (opts.n_steps < 100) throw config_error("shoot_growth_rate requires n_steps >= 100");

    const double fA = p.flux * p.strain_per_dose;
    const double rate_scale = std::max(6.0 * fA, p.surface_energy * k / (2.0 * p.eta));
    if (rate_scale == 0.0) {
        throw convergence_error(
            "unforced film (f*A = 0 and gamma = 0): the kinematic mismatch equals sigma "
            "and has no admissible root");
    }

    const bool incompressible = p.incompressible();
    BiharmonicBasis bb;
    if (incompressible) {
        // sigma enters only through alpha, so the basis pair is reusable
        bb = integrate_biharmonic(p.thickness, k, opts.n_steps);
    }
    int evals = 0;
    const auto trial = [&](double sigma) -> std::optional<TrialEval> {
        ++evals;
        if (sigma == 0.0) return std::nullopt;
        if (!p.viscous_shear() &&
            std::abs(1.0 + p.eta * sigma / p.shear_modulus) < 1e-12) {
            return std::nullopt; // alpha pole
        }
        return incompressible ? trial_incompressible(p, k, sigma, bb)
                              : trial_compressible(p, k, sigma, opts.n_steps, nullptr);
    };

    // Start the expansion just above the roundoff floor of the evaluation.
    double start = 1e-13 * rate_scale;
    if (!incompressible) {
        const double alpha0 = 2.0 * p.eta;
        const double floor_sigma =
            2.0 * p.bulk_modulus * kEps * std::max(k * p.thickness, 1.0) / (alpha0 * 1e-5);
        start = std::max(start, floor_sigma);
    }
    const double neg_limit = p.viscous_shear()
                                 ? 1e9 * rate_scale
                                 : 0.999999 * p.shear_modulus / p.eta;

    struct Bracket {
        double lo, hi, glo, ghi;
    };
    std::optional<Bracket> found;

    const auto expand = [&](double sign, double limit) -> std::optional<Bracket> {
        double prev = 0, gprev = 0;
        bool have_prev = false;
        for (double mag = start; mag <= limit; mag *= 1.35) {
            const double sig = sign * std::min(mag, limit);
            const auto ev = trial(sig);
            if (!ev) {
                have_prev = false;
                continue;
            }
            if (have_prev && ev->g != 0.0 && gprev != 0.0 && (ev->g > 0) != (gprev > 0)) {
                // candidate; reject later if it refines onto a pole
                Bracket br{std::min(prev, sig), std::max(prev, sig), 0, 0};
                br.glo = (br.lo == prev) ? gprev : ev->g;
                br.ghi = (br.lo == prev) ? ev->g : gprev;
                // refine now; if genuine, stop the expansion
                double lo = br.lo, hi = br.hi, glo = br.glo, ghi = br.ghi;
                for (int it = 0; it < 220; ++it) {
                    double x;
                    if (ghi != glo) {
                        x = hi - ghi * (hi - lo) / (ghi - glo);
                        const double w = hi - lo;
                        if (!(x > lo + 0.01 * w && x < hi - 0.01 * w)) x = 0.5 * (lo + hi);
                    } else {
                        x = 0.5 * (lo + hi);
                    }
                    const auto evx = trial(x);
                    if (!evx) break;
                    if ((evx->g > 0) == (glo > 0)) {
                        lo = x;
                        glo = evx->g;
                    } else {
                        hi = x;
                        ghi = evx->g;
                    }
                    if (hi - lo <= 1e-13 * std::max(std::abs(lo), std::abs(hi))) break;
                }
                const double root = std::abs(glo) < std::abs(ghi) ? lo : hi;
                const double gr = std::min(std::abs(glo), std::abs(ghi));
                if (gr <= 1e-6 * std::max(std::abs(root), rate_scale)) {
                    return Bracket{lo, hi, glo, ghi};
                }
                // fall through: pole crossing, keep expanding
            }
            prev = sig;
            gprev = ev->g;
            have_prev = true;
        }
        return std::nullopt;
    };

    found = expand(-1.0, neg_limit);
    if (!found) found = expand(+1.0, 1e6 * rate_scale);
    if (!found) {
        std::ostringstream os;
        os << "no kinematic root bracketed for k=" << k << " (searched |sigma| in [" << start
           << ", " << neg_limit << "] on the stable side; " << evals << " evaluations)";
        throw convergence_error(os.str());
    }

    const double root = std::abs(found->glo) < std::abs(found->ghi) ? found->lo : found->hi;

    // Final evaluation at the root, keeping the profile.
    ShootingResult res;
    res.iterations = evals;
    if (incompressible) {
        const auto ev = trial_incompressible(p, k, root, bb);
        if (!ev) throw singular_error("boundary system singular or ill-conditioned at the root");
        res.sigma = root;
        res.basis_mismatch = ev->cond2x2;
        res.residual = ev->g;
        res.converged = std::abs(ev->g) <= opts.tol * std::abs(root);
        const C i(0.0, 1.0);
        for (size_t s = 0; s < bb.z.size(); ++s) {
            res.z.push_back(bb.z[s]);
            res.w.push_back(ev->c1 * bb.p1[s][0] + ev->c2 * bb.p2[s][0]);
            res.u.push_back(i / k * (ev->c1 * bb.p1[s][1] + ev->c2 * bb.p2[s][1]));
        }
    } else {
        IntegrationResult ir;
        const auto ev = trial_compressible(p, k, root, opts.n_steps, &ir);
        if (!ev) throw singular_error("boundary system singular or ill-conditioned at the root");
        if (ev->cond2x2 > 1e12) {
            throw singular_error("boundary system condition number exceeds 1e12 at the root");
        }
        res.sigma = root;
        res.basis_mismatch = ev->cond2x2;
        res.residual = ev->g;
        res.converged = std::abs(ev->g) <= opts.tol * std::abs(root);
        for (size_t s = 0; s < ir.z.size(); ++s) {
            res.z.push_back(ir.z[s]);
            res.u.push_back(ev->c1 * ir.profile1[s][0] + ev->c2 * ir.profile2[s][0]);
            res.w.push_back(ev->c1 * ir.profile1[s][1] + ev->c2 * ir.profile2[s][1]);
        }
    }
    return res;
}

} // namespace ionfilm
