#ifndef EXRISK_REPORT_HPP
#define EXRISK_REPORT_HPP

#include "exrisk/montecarlo.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace exrisk {

/// {"grid": [...], "values": [...], "extrapolation": tag}
nlohmann::json tabulated_json(const TabulatedFunction& f);
TabulatedFunction tabulated_from_json(const nlohmann::json& j);

nlohmann::json bound_json(const ExcessRiskBound& b);
nlohmann::json pipeline_json(const BoundPipeline& p);
nlohmann::json margins_json(const MarginTables& m);
nlohmann::json coverage_json(const CoverageReport& c);

/// Config echo, pipeline tables, margin tables, coverage and plot series.
/// Results from prepare() give a bounds-only report.
nlohmann::json report_document(const ExperimentConfig& config, const SimulationResult& result);

nlohmann::json trial_json(const ExperimentConfig& config, const TrialRecord& r);
/// One compact JSON record per line.
void write_trial_stream(std::ostream& out, const ExperimentConfig& config, const std::vector<TrialRecord>& records);

nlohmann::json selection_document(const ExperimentConfig& config, const ModelFamily& family,
                                  const MarginTables& margins, const SelectionRun& run);

struct PlotSeries {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::array<double, 2>> points;
};

/// Series stored in a report. Throws Error on a malformed report.
std::vector<PlotSeries> plot_series(const nlohmann::json& report);

/// Two whitespace-separated columns, 17 significant digits.
std::string format_series(const PlotSeries& s);
/// Writes <dir>/<name>.dat per series; returns the paths.
std::vector<std::filesystem::path> write_plot_series(const std::filesystem::path& dir,
                                                     const std::vector<PlotSeries>& series);

/// Process exit status for a finished simulation: 4 when a suite failed, 3
/// when every suite's bounds are vacuous, 0 otherwise.
int simulation_exit_code(const CoverageReport& coverage);

/// Indented dump with a trailing newline.
std::string dump_document(const nlohmann::json& doc);

}  // namespace exrisk

#endif  // EXRISK_REPORT_HPP
