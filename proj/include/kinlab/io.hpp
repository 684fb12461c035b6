#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kinlab/config.hpp"
#include "kinlab/core.hpp"

namespace kinlab {

inline constexpr const char* kinlab_version = "0.1.0";

/// Writes `series` as CSV (header "t,<columns...>", 17 significant digits,
/// rows in time order) and a sibling `<stem>.meta.json` describing the run.
void emit_series(const DiagnosticSeries& series, const std::filesystem::path& csv_path,
                 const nlohmann::ordered_json& metadata);

/// Reads back a CSV produced by emit_series (used by decay-fit).
DiagnosticSeries parse_series_csv(const std::filesystem::path& csv_path);

/// Config echo + code version + derived constants (gamma, eps0, delta).
nlohmann::ordered_json run_metadata(const ExperimentConfig& cfg);

/// --out flag if nonempty, else config out, else $KINLAB_OUT, else cwd.
std::filesystem::path resolve_out_dir(const std::string& flag_value,
                                      const ExperimentConfig& cfg);

/// %.17g rendering used for every float in the CSV output.
std::string format_g17(double x);

} // namespace kinlab
