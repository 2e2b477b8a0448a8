#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "isoglm/experiments.hpp"

namespace isoglm {

// Canonical report documents use insertion-ordered JSON and contain no
// wall-clock data, so re-running a config reproduces the bytes exactly.
// Timings are written to a separate, non-canonical file.
using Json = nlohmann::ordered_json;

Json error_report_to_json(const ErrorReport& report);
Json experiment_report_to_json(const ExperimentReport& report);

Json synthetic_config_to_json(const SyntheticExperimentConfig& config);
SyntheticExperimentConfig synthetic_config_from_json(const Json& j);
Json tabular_config_to_json(const TabularExperimentConfig& config);
TabularExperimentConfig tabular_config_from_json(const Json& j);
Json fit_config_to_json(const FitConfig& config);
FitConfig fit_config_from_json(const Json& j);

Json canonical_synthetic_report(const SyntheticExperimentOutcome& outcome);
Json canonical_tabular_report(const TabularExperimentOutcome& outcome);
Json canonical_fit_report(const FitOutcome& outcome);

// Serialized dump used for report files and bitwise comparisons: 2-space
// indent plus a trailing newline.
std::string dump_report(const Json& j);

// Two-column transfer plot data. Linear-mode functions emit one line per
// knot; step-mode functions emit both endpoints of every flat piece, so
// level changes appear as repeated abscissae.
std::string transfer_plot_text(const MonotoneFn& fn);

struct TransferPlotCheck {
    bool monotone = false;
    bool lipschitz_1 = false;
    bool piecewise_constant = false;
    std::size_t points = 0;
};

// Re-reads emitted plot data and checks the shape claims against it.
TransferPlotCheck validate_transfer_plot(const std::filesystem::path& path);

// File emission; returns the paths written. Every writer creates the
// directory if needed and writes report.json plus format-specific siblings.
std::vector<std::filesystem::path> write_outputs(const SyntheticExperimentOutcome& outcome,
                                                 const std::filesystem::path& dir);
std::vector<std::filesystem::path> write_outputs(const TabularExperimentOutcome& outcome,
                                                 const std::filesystem::path& dir);
std::vector<std::filesystem::path> write_outputs(const FitOutcome& outcome,
                                                 const std::filesystem::path& dir);

}  // namespace isoglm
