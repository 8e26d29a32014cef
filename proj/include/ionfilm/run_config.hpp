#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionfilm/params.hpp"

namespace ionfilm {

enum class Mode { steady, dispersion, neutral, viscous, verify };
enum class Spacing { linear, log };
enum class OutputFormat { csv, json };

struct SweepSpec {
    char variable = 'k'; ///< 'k' (dimensional, 1/m) or 'Q' (dimensionless)
    double min = 0, max = 0;
    int count = 0;
    Spacing spacing = Spacing::linear;
    bool present = false;
};

struct Overrides {
    std::optional<double> gamma_ratio; ///< replaces B/G in dispersion mode
    double tol = 1e-6;                 ///< verify acceptance tolerance
    int n_steps = 2000;                ///< oracle integration steps
};

/// Parsed run description: flat key=value config with unit suffixes, plus the
/// command-line mode and output selection.
struct RunConfig {
    Mode mode = Mode::steady;
    std::optional<MaterialParams> material;
    std::optional<double> measured_stress;
    SweepSpec sweep;
    Overrides overrides;
    std::vector<double> verify_q, verify_d, verify_c, verify_gamma;
    std::string out_path;  ///< empty = stdout
    OutputFormat format = OutputFormat::csv;
};

/// Parse the key=value body. Values are "NUMBER [UNIT]" with a fixed per-key
/// unit table (lab-customary units are converted to SI on ingestion); moduli
/// accept the literal "inf". Unknown keys and malformed values raise
/// config_error naming the offender.
RunConfig parse_config_text(Mode mode, const std::string& text);
RunConfig parse_config_file(Mode mode, const std::string& path);

/// Mode-specific completeness and sweep sanity checks (count >= 2, min < max,
/// min > 0 for log spacing, required fields present).
void validate_config(const RunConfig& cfg);

const char* mode_name(Mode m);

} // namespace ionfilm
