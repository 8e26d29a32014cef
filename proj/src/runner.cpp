#include "ionfilm/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ionfilm/dispersion.hpp"
#include "ionfilm/oracle.hpp"
#include "ionfilm/steady.hpp"

namespace ionfilm {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::vector<double> sweep_values(const SweepSpec& s) {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(s.count));
    for (int i = 0; i < s.count; ++i) {
        const double t = static_cast<double>(i) / (s.count - 1);
        if (s.spacing == Spacing::log) {
            v.push_back(std::exp(std::log(s.min) + t * (std::log(s.max) - std::log(s.min))));
        } else {
            v.push_back(s.min + t * (s.max - s.min));
        }
    }
    return v;
}

std::vector<double> default_or(const std::vector<double>& v, std::initializer_list<double> def) {
    return v.empty() ? std::vector<double>(def) : v;
}

} // namespace

Report run_steady(const RunConfig& cfg) {
    const MaterialParams& p = *cfg.material;
    const SteadyState s = steady_state(p);
    Report rep;
    rep.columns = {"value"};
    const auto row = [&rep](const std::string& name, double v, const std::string& note) {
        rep.row_labels.push_back(name);
        rep.rows.push_back({v});
        rep.row_notes.push_back(note);
    };
    const std::string comp = s.stress.xx < 0 ? "compressive" : "";
    row("stress_xx", s.stress.xx, comp);
    row("stress_yy", s.stress.yy, comp);
    row("stress_zz", s.stress.zz, "");
    row("stress_trace", s.stress_trace, "");
    const std::string strain_note = s.incompressible ? "incompressible" : "";
    row("strain_xx", s.strain.xx, strain_note);
    row("strain_yy", s.strain.yy, strain_note);
    row("strain_zz", s.strain.zz, strain_note);
    row("strain_trace", s.strain_trace, strain_note);
    if (cfg.measured_stress) {
        row("measured_stress", *cfg.measured_stress, "");
        row("measured_over_computed", compare_to_measurement(s, *cfg.measured_stress), "");
    }
    return rep;
}

Report run_neutral(const RunConfig& cfg) {
    const MaterialParams& p = *cfg.material;
    const double C = p.surface_energy / (2.0 * p.shear_modulus * p.thickness);
    Report rep;
    rep.columns = {"Q", "D_star"};
    for (double Q : sweep_values(cfg.sweep)) {
        rep.rows.push_back({Q, neutral_boundary(Q, C)});
    }
    rep.scalars.emplace_back("C", C);
    return rep;
}

Report run_dispersion(const RunConfig& cfg) {
    const MaterialParams& p = *cfg.material;
    Report rep;
    rep.columns = {"k", "Q", "sigma", "R", "converged"};
    int failures = 0;
    for (double x : sweep_values(cfg.sweep)) {
        const double k = (cfg.sweep.variable == 'Q') ? x / p.thickness : x;
        const double Q = k * p.thickness;
        if (cfg.mode == Mode::viscous) {
            const double sigma = viscous_growth(p, k);
            const double R = p.viscous_shear() ? 0.0 : p.eta * sigma / p.shear_modulus;
            rep.rows.push_back({k, Q, sigma, R, 1.0});
            continue;
        }
        DimensionlessState s = to_dimensionless(p, k, 0.0);
        if (cfg.overrides.gamma_ratio) s.Gamma = *cfg.overrides.gamma_ratio;
        try {
            const DispersionRoot root = solve_growth_rate(s);
            const double sigma = growth_rate_dimensional(p, root.R);
            rep.rows.push_back({k, Q, sigma, root.R, root.converged ? 1.0 : 0.0});
            if (!root.converged) ++failures;
        } catch (const error&) {
            // recorded in-row; the sweep continues
            const double nan = std::nan("");
            rep.rows.push_back({k, Q, nan, nan, 0.0});
            ++failures;
        }
    }
    rep.scalars.emplace_back("failed_rows", failures);
    if (failures > 0) rep.exit_code = 2;
    return rep;
}

Report run_verify(const RunConfig& cfg) {
    const auto qs = default_or(cfg.verify_q, {0.2, 0.5, 2.0});
    const auto ds = default_or(cfg.verify_d, {0.01, 0.2, 1.0});
    const auto cs = default_or(cfg.verify_c, {0.01, 0.1, 1.0});
    const auto gs = default_or(cfg.verify_gamma, {1.0, 10.0, 1e4});

    Report rep;
    rep.columns = {"Q", "D", "C", "Gamma", "R_analytic", "R_shoot", "rel_dev", "converged"};
    double max_dev = 0.0;
    int failures = 0;
    ShootingOptions opts;
    opts.n_steps = cfg.overrides.n_steps;

    for (double Q : qs)
        for (double D : ds)
            for (double C : cs)
                for (double Gamma : gs) {
                    DimensionlessState s;
                    s.Q = Q;
                    s.D = D;
                    s.C = C;
                    s.Gamma = Gamma;
                    try {
                        const DispersionRoot root = solve_growth_rate(s);
                        // unit-scale realization of the same dimensionless point
                        MaterialParams p{};
                        p.eta = 1.0;
                        p.shear_modulus = 1.0;
                        p.bulk_modulus = Gamma;
                        p.surface_energy = 2.0 * C;
                        p.flux = D / 6.0;
                        p.strain_per_dose = 1.0;
                        p.thickness = 1.0;
                        const ShootingResult sh = shoot_growth_rate(p, Q, opts);
                        const double dev = std::abs(sh.sigma - root.R) / std::abs(root.R);
                        max_dev = std::max(max_dev, dev);
                        rep.rows.push_back({Q, D, C, Gamma, root.R, sh.sigma, dev,
                                            (root.converged && sh.converged) ? 1.0 : 0.0});
                        if (!root.converged || !sh.converged) ++failures;
                    } catch (const error&) {
                        const double nan = std::nan("");
                        rep.rows.push_back({Q, D, C, Gamma, nan, nan, nan, 0.0});
                        ++failures;
                    }
                }
    rep.scalars.emplace_back("max_rel_dev", max_dev);
    rep.scalars.emplace_back("failed_rows", failures);
    rep.scalars.emplace_back("tol", cfg.overrides.tol);
    if (failures > 0) {
        rep.exit_code = 2;
    } else if (max_dev > cfg.overrides.tol) {
        rep.exit_code = 3;
    }
    return rep;
}

std::string to_csv(const Report& rep) {
    std::ostringstream os;
    const bool labeled = !rep.row_labels.empty();
    const bool noted = !rep.row_notes.empty();
    if (labeled) os << "quantity,";
    for (size_t c = 0; c < rep.columns.size(); ++c) {
        os << rep.columns[c] << (c + 1 < rep.columns.size() ? "," : "");
    }
    if (noted) os << ",note";
    os << "\n";
    for (size_t r = 0; r < rep.rows.size(); ++r) {
        if (labeled) os << rep.row_labels[r] << ",";
        for (size_t c = 0; c < rep.rows[r].size(); ++c) {
            os << fmt17(rep.rows[r][c]) << (c + 1 < rep.rows[r].size() ? "," : "");
        }
        if (noted) os << "," << rep.row_notes[r];
        os << "\n";
    }
    return os.str();
}

std::string to_json(const Report& rep, const RunConfig& cfg, double runtime_s) {
    nlohmann::json j;
    nlohmann::json echo;
    echo["mode"] = mode_name(cfg.mode);
    if (cfg.material) {
        const MaterialParams& p = *cfg.material;
        echo["material"] = {{"eta", p.eta},
                            {"shear_modulus", p.shear_modulus},
                            {"bulk_modulus", p.bulk_modulus},
                            {"surface_energy", p.surface_energy},
                            {"flux", p.flux},
                            {"strain_per_dose", p.strain_per_dose},
                            {"thickness", p.thickness}};
    }
    if (cfg.sweep.present) {
        echo["sweep"] = {{"variable", std::string(1, cfg.sweep.variable)},
                         {"min", cfg.sweep.min},
                         {"max", cfg.sweep.max},
                         {"count", cfg.sweep.count},
                         {"spacing", cfg.sweep.spacing == Spacing::log ? "log" : "linear"}};
    }
    if (cfg.measured_stress) echo["measured_stress"] = *cfg.measured_stress;
    if (cfg.overrides.gamma_ratio) echo["gamma_ratio"] = *cfg.overrides.gamma_ratio;
    echo["tol"] = cfg.overrides.tol;
    echo["n_steps"] = cfg.overrides.n_steps;
    j["config_echo"] = echo;

    nlohmann::json results = nlohmann::json::array();
    const bool labeled = !rep.row_labels.empty();
    const bool noted = !rep.row_notes.empty();
    for (size_t r = 0; r < rep.rows.size(); ++r) {
        nlohmann::json row;
        if (labeled) row["quantity"] = rep.row_labels[r];
        for (size_t c = 0; c < rep.rows[r].size(); ++c) {
            const double v = rep.rows[r][c];
            if (std::isnan(v)) {
                row[rep.columns[c]] = nullptr;
            } else {
                row[rep.columns[c]] = v;
            }
        }
        if (noted && !rep.row_notes[r].empty()) row["note"] = rep.row_notes[r];
        results.push_back(std::move(row));
    }
    j["results"] = std::move(results);

    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["runtime_s"] = runtime_s;
    for (const auto& [k, v] : rep.scalars) meta[k] = v;
    j["metadata"] = std::move(meta);
    return j.dump(2) + "\n";
}

int execute(const RunConfig& cfg, std::ostream& fallback_out) {
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    switch (cfg.mode) {
        case Mode::steady: rep = run_steady(cfg); break;
        case Mode::neutral: rep = run_neutral(cfg); break;
        case Mode::dispersion:
        case Mode::viscous: rep = run_dispersion(cfg); break;
        case Mode::verify: rep = run_verify(cfg); break;
    }
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string payload =
        cfg.format == OutputFormat::csv ? to_csv(rep) : to_json(rep, cfg, runtime);
    if (cfg.out_path.empty()) {
        fallback_out << payload;
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw config_error("cannot open output file '" + cfg.out_path + "'");
        f << payload;
    }
    return rep.exit_code;
}

} // namespace ionfilm
