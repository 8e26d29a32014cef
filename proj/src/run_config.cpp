#include "ionfilm/run_config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ionfilm {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct UnitTable {
    const char* default_unit;
    std::map<std::string, double> factors; // unit -> multiplier to SI
};

const std::map<std::string, UnitTable>& unit_tables() {
    static const std::map<std::string, UnitTable> t = {
        {"eta", {"Pa*s", {{"Pa*s", 1.0}, {"Pa.s", 1.0}}}},
        {"shear_modulus", {"Pa", {{"Pa", 1.0}, {"MPa", 1e6}, {"GPa", 1e9}}}},
        {"bulk_modulus", {"Pa", {{"Pa", 1.0}, {"MPa", 1e6}, {"GPa", 1e9}}}},
        {"measured_stress", {"Pa", {{"Pa", 1.0}, {"MPa", 1e6}, {"GPa", 1e9}}}},
        {"surface_energy", {"N/m", {{"N/m", 1.0}, {"mN/m", 1e-3}, {"J/m2", 1.0}}}},
        {"flux", {"/m2/s", {{"/m2/s", 1.0}, {"/cm2/s", 1e4}, {"ions/m2/s", 1.0}, {"ions/cm2/s", 1e4}}}},
        {"strain_per_dose", {"m2", {{"m2", 1.0}, {"cm2", 1e-4}, {"m2/ion", 1.0}, {"cm2/ion", 1e-4}}}},
        {"thickness", {"m", {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}}},
        {"sweep_min_k", {"/m", {{"/m", 1.0}, {"/cm", 1e2}, {"/nm", 1e9}}}},
        {"sweep_max_k", {"/m", {{"/m", 1.0}, {"/cm", 1e2}, {"/nm", 1e9}}}},
    };
    return t;
}

double parse_number_with_unit(const std::string& key, const std::string& table_key,
                              const std::string& value, bool allow_inf) {
    std::istringstream is(trim(value));
    std::string num, unit;
    is >> num >> unit;
    if (num.empty()) throw config_error("empty value for '" + key + "'");
    long double x;
    if (num == "inf") {
        if (!allow_inf) throw config_error("'inf' is not a valid value for '" + key + "'");
        x = infinite_modulus;
    } else {
        try {
            size_t pos = 0;
            x = std::stold(num, &pos);
            if (pos != num.size()) throw std::invalid_argument(num);
        } catch (const std::exception&) {
            throw config_error("cannot parse number '" + num + "' for '" + key + "'");
        }
    }
    const auto it = unit_tables().find(table_key);
    if (it == unit_tables().end()) {
        if (!unit.empty()) {
            throw config_error("'" + key + "' is dimensionless, unexpected unit '" + unit + "'");
        }
        return static_cast<double>(x);
    }
    if (unit.empty()) unit = it->second.default_unit;
    const auto f = it->second.factors.find(unit);
    if (f == it->second.factors.end()) {
        throw config_error("unknown unit '" + unit + "' for '" + key + "'");
    }
    // convert in extended precision and round once, so a lab-unit config and
    // its hand-converted SI twin land on the identical double
    return std::isinf(static_cast<double>(x))
               ? static_cast<double>(x)
               : static_cast<double>(x * static_cast<long double>(f->second));
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            if (item == "inf") {
                out.push_back(infinite_modulus);
            } else {
                size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw config_error("cannot parse list entry '" + item + "' for '" + key + "'");
        }
    }
    if (out.empty()) throw config_error("empty list for '" + key + "'");
    return out;
}

} // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::steady: return "steady";
        case Mode::dispersion: return "dispersion";
        case Mode::neutral: return "neutral";
        case Mode::viscous: return "viscous";
        case Mode::verify: return "verify";
    }
    return "?";
}

RunConfig parse_config_text(Mode mode, const std::string& text) {
    RunConfig cfg;
    cfg.mode = mode;

    MaterialParams mp{};
    bool have[7] = {false, false, false, false, false, false, false};
    std::optional<std::string> raw_sweep_min, raw_sweep_max;

    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "eta") { mp.eta = parse_number_with_unit(key, "eta", value, false); have[0] = true; }
        else if (key == "shear_modulus") { mp.shear_modulus = parse_number_with_unit(key, key, value, true); have[1] = true; }
        else if (key == "bulk_modulus") { mp.bulk_modulus = parse_number_with_unit(key, key, value, true); have[2] = true; }
        else if (key == "surface_energy") { mp.surface_energy = parse_number_with_unit(key, key, value, false); have[3] = true; }
        else if (key == "flux") { mp.flux = parse_number_with_unit(key, key, value, false); have[4] = true; }
        else if (key == "strain_per_dose") { mp.strain_per_dose = parse_number_with_unit(key, key, value, false); have[5] = true; }
        else if (key == "thickness") { mp.thickness = parse_number_with_unit(key, key, value, false); have[6] = true; }
        else if (key == "measured_stress") { cfg.measured_stress = parse_number_with_unit(key, key, value, false); }
        else if (key == "sweep_variable") {
            const std::string v = trim(value);
            if (v != "k" && v != "Q") throw config_error("sweep_variable must be 'k' or 'Q'");
            cfg.sweep.variable = v[0];
            cfg.sweep.present = true;
        }
        else if (key == "sweep_min" || key == "sweep_max") {
            // unit interpretation depends on the sweep variable; resolve after
            // the whole file is read
            if (key == "sweep_min") raw_sweep_min = value; else raw_sweep_max = value;
            cfg.sweep.present = true;
        }
        else if (key == "sweep_count") {
            cfg.sweep.count = static_cast<int>(parse_number_with_unit(key, "", value, false));
            cfg.sweep.present = true;
        }
        else if (key == "sweep_spacing") {
            const std::string v = trim(value);
            if (v == "linear") cfg.sweep.spacing = Spacing::linear;
            else if (v == "log") cfg.sweep.spacing = Spacing::log;
            else throw config_error("sweep_spacing must be 'linear' or 'log'");
            cfg.sweep.present = true;
        }
        else if (key == "gamma_ratio") { cfg.overrides.gamma_ratio = parse_number_with_unit(key, "", value, true); }
        else if (key == "tol") { cfg.overrides.tol = parse_number_with_unit(key, "", value, false); }
        else if (key == "n_steps") { cfg.overrides.n_steps = static_cast<int>(parse_number_with_unit(key, "", value, false)); }
        else if (key == "verify_q") { cfg.verify_q = parse_list(key, value); }
        else if (key == "verify_d") { cfg.verify_d = parse_list(key, value); }
        else if (key == "verify_c") { cfg.verify_c = parse_list(key, value); }
        else if (key == "verify_gamma") { cfg.verify_gamma = parse_list(key, value); }
        else {
            throw config_error("unknown config key '" + key + "' (line " + std::to_string(lineno) + ")");
        }
    }

    const std::string sweep_table = (cfg.sweep.variable == 'k') ? "_k" : "";
    if (raw_sweep_min) {
        cfg.sweep.min = parse_number_with_unit("sweep_min", sweep_table.empty() ? "" : "sweep_min_k",
                                               *raw_sweep_min, false);
    }
    if (raw_sweep_max) {
        cfg.sweep.max = parse_number_with_unit("sweep_max", sweep_table.empty() ? "" : "sweep_max_k",
                                               *raw_sweep_max, false);
    }

    const bool any_material = have[0] || have[1] || have[2] || have[3] || have[4] || have[5] || have[6];
    if (any_material) {
        static const char* names[7] = {"eta", "shear_modulus", "bulk_modulus", "surface_energy",
                                       "flux", "strain_per_dose", "thickness"};
        for (int i = 0; i < 7; ++i) {
            if (!have[i]) throw config_error(std::string("missing material constant '") + names[i] + "'");
        }
        mp.validate();
        cfg.material = mp;
    }
    return cfg;
}

RunConfig parse_config_file(Mode mode, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(mode, ss.str());
}

void validate_config(const RunConfig& cfg) {
    const bool needs_material = cfg.mode != Mode::verify;
    if (needs_material && !cfg.material) {
        throw config_error(std::string("mode '") + mode_name(cfg.mode) +
                           "' requires the material constants");
    }
    const bool needs_sweep =
        cfg.mode == Mode::dispersion || cfg.mode == Mode::neutral || cfg.mode == Mode::viscous;
    if (needs_sweep) {
        if (!cfg.sweep.present) {
            throw config_error(std::string("mode '") + mode_name(cfg.mode) + "' requires a sweep");
        }
        if (cfg.sweep.count < 2) throw config_error("sweep_count must be >= 2");
        if (!(cfg.sweep.min < cfg.sweep.max)) throw config_error("sweep_min must be < sweep_max");
        if (cfg.sweep.spacing == Spacing::log && !(cfg.sweep.min > 0)) {
            throw config_error("log spacing requires sweep_min > 0");
        }
        if (cfg.mode == Mode::neutral && cfg.sweep.variable != 'Q') {
            throw config_error("neutral mode sweeps the dimensionless wavenumber: set sweep_variable = Q");
        }
    }
    if (cfg.mode == Mode::neutral || cfg.mode == Mode::dispersion) {
        if (cfg.material && cfg.material->viscous_shear()) {
            throw config_error(std::string("mode '") + mode_name(cfg.mode) +
                               "' needs a finite shear modulus (use viscous mode for the sentinel)");
        }
    }
    // n_steps below the oracle minimum is allowed through parsing; the oracle
    // rejects it per call so the failure surfaces in-row where verify wants it
    if (!(cfg.overrides.tol > 0)) throw config_error("tol must be > 0");
}

} // namespace ionfilm
