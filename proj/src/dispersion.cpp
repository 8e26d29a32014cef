#include "ionfilm/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ionfilm {

namespace {

constexpr double kScaledAbove = 300.0; // switch lhs evaluation to exp-scaled form

struct UVGroups {
    double U, V, VminusU, oneMinusU;
};

UVGroups uv_groups(double R, double Gamma) {
    if (std::isinf(Gamma)) {
        return {1.0, 1.0, 0.0, 0.0};
    }
    const double denom = 7.0 * R + 3.0 * Gamma * (1.0 + R);
    if (denom == 0.0) {
        throw singular_error("U,V pole: 7R + 3*Gamma*(1+R) = 0");
    }
    return {(R + 3.0 * Gamma * (1.0 + R)) / denom,
            (4.0 * R + 3.0 * Gamma * (1.0 + R)) / denom,
            3.0 * R / denom,
            6.0 * R / denom};
}

struct LhsTerms {
    double relaxation, beam, capillary;
};

// Evaluate the three terms of the relation. For Q > 300 every term carries a
// common 4*exp(-2Q) factor so the sum stays representable.
LhsTerms lhs_terms(double R, const DimensionlessState& s) {
    if (R == -1.0) {
        throw singular_error("R = -1: relaxation factor 2R/(1+R) diverges");
    }
    const UVGroups g = uv_groups(R, s.Gamma);
    const double Q = s.Q;
    const double pre = 2.0 * R / (1.0 + R);

    if (Q > kScaledAbove) {
        const double e2 = std::exp(-2.0 * Q);
        const double e4 = e2 * e2;
        const double sc = 4.0 * e2;                        // algebraic-term scale
        const double sh2 = (1.0 - e2) * (1.0 - e2);        // sinh^2(Q) * 4 exp(-2Q)
        const double sml = 2.0 * (1.0 - e4) - 8.0 * Q * e2; // (sinh 2Q - 2Q) * 4 exp(-2Q)
        const double P = (g.V * g.V + g.U * g.U * Q * Q) * sc + g.U * sh2;
        return {pre * P,
                s.D * (g.U * g.U * Q * Q * sc - g.VminusU * sh2),
                s.C * g.V * Q * (sml + 2.0 * Q * g.oneMinusU * sc)};
    }

    const double sh = std::sinh(Q);
    const double sh2 = sh * sh;
    const double P = g.V * g.V + g.U * g.U * Q * Q + g.U * sh2;
    // sinh(2Q) - 2UQ = (sinh(2Q) - 2Q) + 2Q(1-U), both pieces cancellation-free
    const double cap = sinh_minus_linear(2.0 * Q) + 2.0 * Q * g.oneMinusU;
    return {pre * P,
            s.D * (g.U * g.U * Q * Q - g.VminusU * sh2),
            s.C * g.V * Q * cap};
}

// ---------------------------------------------------------------------------
// root refinement: bisection with secant acceleration
// ---------------------------------------------------------------------------

struct Refined {
    double root = 0, f_root = 0;
    double lo = 0, hi = 0;
    int iterations = 0;
    bool width_ok = false;
    bool resid_ok = false;
};

template <typename F>
Refined refine_bracket(F&& f, double lo, double hi, double flo, double fhi,
                       const DimensionlessState& s) {
    Refined r;
    const auto width_tol = [](double x) { return 1e-12 * std::max(1.0, std::abs(x)); };
    const auto eps_floor = [](double a, double b) {
        return 8.0 * std::numeric_limits<double>::epsilon() *
               std::max({std::abs(a), std::abs(b), 1e-30});
    };

    double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
    double fbest = std::abs(flo) < std::abs(fhi) ? flo : fhi;
    for (int it = 0; it < 240; ++it) {
        r.iterations = it + 1;
        const double w = hi - lo;
        double x;
        // secant estimate, fall back to the midpoint if it leaves the bracket
        if (fhi != flo) {
            x = hi - fhi * (hi - lo) / (fhi - flo);
            if (!(x > lo + 0.01 * w && x < hi - 0.01 * w)) x = 0.5 * (lo + hi);
        } else {
            x = 0.5 * (lo + hi);
        }
        double fx;
        try {
            fx = f(x);
        } catch (const singular_error&) {
            break; // bracket collapsed onto a pole; candidate is rejected below
        }
        if (!std::isfinite(fx)) break;
        if (std::abs(fx) < std::abs(fbest)) {
            best = x;
            fbest = fx;
        }
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        const bool width_done = (hi - lo) <= width_tol(0.5 * (lo + hi));
        if (width_done) {
            const double scale = dispersion_term_scale(best, s);
            if (std::abs(fbest) <= 1e-12 * scale || (hi - lo) <= eps_floor(lo, hi)) break;
        }
    }
    r.lo = lo;
    r.hi = hi;
    r.root = best;
    r.f_root = fbest;
    r.width_ok = (hi - lo) <= width_tol(r.root);
    r.resid_ok = std::abs(fbest) <= 1e-12 * dispersion_term_scale(r.root, s);
    return r;
}

// geometric ladder of magnitudes in [lo_mag, hi_mag]
std::vector<double> log_ladder(double lo_mag, double hi_mag, int n) {
    std::vector<double> v;
    if (!(hi_mag > lo_mag) || n < 2) return v;
    const double la = std::log(lo_mag), lb = std::log(hi_mag);
    v.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        v.push_back(std::exp(la + (lb - la) * i / (n - 1)));
    }
    return v;
}

} // namespace

double sinh_minus_linear(double y) {
    const double a = std::abs(y);
    if (a >= 1.0) return std::sinh(y) - y;
    // y^3/6 * (1 + y^2/20 + y^4/840 + ...)
    const double y2 = y * y;
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 20; ++n) {
        term *= y2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return y * y2 / 6.0 * sum;
}

double dispersion_lhs(double R, const DimensionlessState& s) {
    const LhsTerms t = lhs_terms(R, s);
    return t.relaxation + t.beam + t.capillary;
}

std::complex<double> dispersion_lhs(std::complex<double> R, const DimensionlessState& s) {
    using C = std::complex<double>;
    if (R == C(-1.0, 0.0)) {
        throw singular_error("R = -1: relaxation factor 2R/(1+R) diverges");
    }
    C U(1.0, 0.0), V(1.0, 0.0);
    if (!std::isinf(s.Gamma)) {
        const C denom = 7.0 * R + 3.0 * s.Gamma * (1.0 + R);
        if (denom == C(0.0, 0.0)) {
            throw singular_error("U,V pole: 7R + 3*Gamma*(1+R) = 0");
        }
        U = (R + 3.0 * s.Gamma * (1.0 + R)) / denom;
        V = (4.0 * R + 3.0 * s.Gamma * (1.0 + R)) / denom;
    }
    const double Q = s.Q;
    const double sh2 = std::sinh(Q) * std::sinh(Q);
    return (2.0 * R / (1.0 + R)) * (V * V + U * U * Q * Q + U * sh2) +
           s.D * (U * U * Q * Q - (V - U) * sh2) +
           s.C * V * Q * (std::sinh(2.0 * Q) - 2.0 * U * Q);
}

double dispersion_term_scale(double R, const DimensionlessState& s) {
    const LhsTerms t = lhs_terms(R, s);
    return std::max({std::abs(t.relaxation), std::abs(t.beam), std::abs(t.capillary),
                     std::numeric_limits<double>::min()});
}

double dispersion_pole(const DimensionlessState& s) {
    if (std::isinf(s.Gamma)) return -1.0;
    return -3.0 * s.Gamma / (3.0 * s.Gamma + 7.0);
}

DispersionRoot solve_growth_rate(const DimensionlessState& s) {
    if (!(s.Q > 0.0)) throw config_error("solve_growth_rate requires Q > 0");
    if (s.D < 0.0 || s.C < 0.0) throw config_error("solve_growth_rate requires D, C >= 0");

    DispersionRoot out;
    out.Q = s.Q;

    if (s.D == 0.0 && s.C == 0.0) {
        // Unforced film: neutrally steady for every Q.
        out.R = 0.0;
        out.residual = 0.0;
        out.converged = true;
        out.all_roots = {0.0};
        return out;
    }

    const double rp = dispersion_pole(s); // in [-1, 0)
    const double rp_mag = -rp;

    // --- assemble sample lists per continuity segment ---
    std::vector<std::vector<double>> segments;

    if (std::isinf(s.Gamma)) {
        // single pole at -1: one negative segment
        std::vector<double> seg{0.0};
        for (double m : log_ladder(1e-13, 0.98, 200)) seg.push_back(-m);
        for (double d : log_ladder(1e-9, 0.02, 48)) seg.push_back(-1.0 + d);
        std::sort(seg.begin(), seg.end(), std::greater<>());
        segments.push_back(std::move(seg));
    } else {
        // (rp, 0]: geometric from 0 plus an approach tail to the pole
        std::vector<double> segA{0.0};
        for (double m : log_ladder(1e-13, 0.98 * rp_mag, 200)) segA.push_back(-m);
        for (double d : log_ladder(1e-9 * rp_mag, 0.02 * rp_mag, 48)) segA.push_back(rp + d);
        std::sort(segA.begin(), segA.end(), std::greater<>());
        segA.erase(std::unique(segA.begin(), segA.end()), segA.end());
        segments.push_back(std::move(segA));

        // (-1, rp): approach tails at both ends plus a uniform interior; for
        // large Gamma the pole sits close to -1, so the spans are clamped to
        // stay strictly inside the segment
        std::vector<double> segB;
        const double span = rp - (-1.0); // = 1 + rp > 0
        const double tail = std::min(0.02 * rp_mag, 0.45 * span);
        for (double d : log_ladder(1e-9 * tail, tail, 48)) segB.push_back(rp - d);
        const double lo = -1.0, hi = rp - tail;
        if (hi > lo) {
            for (int i = 1; i <= 192; ++i) {
                segB.push_back(lo + (hi - lo) * i / 193.0);
            }
            for (double d : log_ladder(1e-9 * (hi - lo), 0.25 * (hi - lo), 32)) {
                segB.push_back(-1.0 + d);
            }
        }
        std::sort(segB.begin(), segB.end(), std::greater<>());
        segB.erase(std::unique(segB.begin(), segB.end()), segB.end());
        while (!segB.empty() && segB.back() <= -1.0) segB.pop_back();
        segments.push_back(std::move(segB));
    }

    // positive guard segment (0, 10]
    {
        std::vector<double> segC{0.0};
        for (double m : log_ladder(1e-13, 10.0, 120)) segC.push_back(m);
        segments.push_back(std::move(segC));
    }

    const auto f = [&s](double R) { return dispersion_lhs(R, s); };

    std::vector<Refined> accepted;
    int rejected = 0;
    for (const auto& seg : segments) {
        double prev = 0.0, fprev = 0.0;
        bool have_prev = false;
        for (double R : seg) {
            double fx;
            try {
                fx = f(R);
            } catch (const singular_error&) {
                have_prev = false;
                continue;
            }
            if (!std::isfinite(fx)) {
                have_prev = false;
                continue;
            }
            if (have_prev && fx != 0.0 && fprev != 0.0 && (fx > 0) != (fprev > 0)) {
                const double lo = std::min(prev, R), hi = std::max(prev, R);
                const double flo = (lo == prev) ? fprev : fx;
                const double fhi = (lo == prev) ? fx : fprev;
                Refined ref = refine_bracket(f, lo, hi, flo, fhi, s);
                const double scale = dispersion_term_scale(ref.root, s);
                if (std::abs(ref.f_root) <= 1e-6 * scale) {
                    accepted.push_back(ref);
                } else {
                    ++rejected; // pole crossing, not a root
                }
            }
            prev = R;
            fprev = fx;
            have_prev = true;
        }
    }

    if (accepted.empty()) {
        std::ostringstream os;
        os << "no growth-rate root bracketed in (-1, 10] for Q=" << s.Q << " D=" << s.D
           << " C=" << s.C << " Gamma=" << s.Gamma << " (" << rejected
           << " pole crossings rejected)";
        throw convergence_error(os.str());
    }

    std::sort(accepted.begin(), accepted.end(),
              [](const Refined& a, const Refined& b) { return std::abs(a.root) < std::abs(b.root); });

    const Refined& best = accepted.front();
    out.R = best.root;
    out.residual = best.f_root;
    out.bracket = {best.lo, best.hi};
    out.iterations = best.iterations;
    out.converged = best.width_ok && best.resid_ok;
    out.multiple_roots = accepted.size() > 1;
    for (const Refined& r : accepted) out.all_roots.push_back(r.root);
    return out;
}

double neutral_boundary(double Q, double C) {
    if (Q < 0.0) throw config_error("neutral_boundary requires Q >= 0");
    if (Q == 0.0) return 0.0;
    return -C * sinh_minus_linear(2.0 * Q) / Q;
}

double long_wavelength_growth(const DimensionlessState& s) {
    const double Q2 = s.Q * s.Q;
    return -0.5 * s.D * Q2 - (2.0 / 3.0) * s.C * Q2 * Q2;
}

double viscous_growth(const MaterialParams& p, double k) {
    if (k < 0.0) throw config_error("viscous_growth requires k >= 0");
    if (k == 0.0) return 0.0;
    const double Q = p.thickness * k;
    const double fA = p.flux * p.strain_per_dose;
    const double cap = k * p.surface_energy / (2.0 * p.eta);

    if (Q > kScaledAbove) {
        const double e2 = std::exp(-2.0 * Q);
        const double e4 = e2 * e2;
        const double sc = 4.0 * e2;
        const double num = 6.0 * fA * Q * Q * sc + cap * (2.0 * (1.0 - e4) - 8.0 * Q * e2);
        const double den = (1.0 + 2.0 * Q * Q) * sc + 2.0 * (1.0 + e4);
        return -num / den;
    }
    const double num = 6.0 * fA * Q * Q + cap * sinh_minus_linear(2.0 * Q);
    const double den = 1.0 + 2.0 * Q * Q + std::cosh(2.0 * Q);
    return -num / den;
}

} // namespace ionfilm
