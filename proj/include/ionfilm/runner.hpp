#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ionfilm/run_config.hpp"

namespace ionfilm {

inline constexpr const char* kVersion = "0.1.0";

/// Tabular result of one run: numeric cells with optional per-row labels and
/// notes, plus summary scalars that land in the metadata section.
struct Report {
    std::vector<std::string> columns;                 ///< numeric column names
    std::vector<std::vector<double>> rows;            ///< NaN marks a failed cell
    std::vector<std::string> row_labels;              ///< optional first column
    std::vector<std::string> row_notes;               ///< optional trailing column
    std::vector<std::pair<std::string, double>> scalars;
    int exit_code = 0;
};

Report run_steady(const RunConfig& cfg);
Report run_neutral(const RunConfig& cfg);
Report run_dispersion(const RunConfig& cfg); ///< also serves viscous mode
Report run_verify(const RunConfig& cfg);

/// Fixed 17-significant-digit scientific CSV, LF line endings. Deterministic:
/// identical config yields byte-identical output.
std::string to_csv(const Report& rep);

/// {config_echo, results, metadata:{version, runtime_s, ...}} with
/// shortest-round-trip floats; NaN cells serialize as null.
std::string to_json(const Report& rep, const RunConfig& cfg, double runtime_s);

/// Parse config, dispatch on mode, write to cfg.out_path or the stream.
/// Returns the process exit code (0 ok, 1 config, 2 numerical, 3 verification).
int execute(const RunConfig& cfg, std::ostream& fallback_out);

} // namespace ionfilm
