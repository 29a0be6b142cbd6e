#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tered/panel.hpp"
#include "tered/redundancy.hpp"

namespace tered::io {

inline constexpr const char* kToolName = "tered";
inline constexpr const char* kToolVersion = "0.1.0";

/// Reads a panel from CSV: a header of channel labels, then one row of decimal
/// values per sample. Throws ParseError with 1-based line/column on malformed
/// input and NonFiniteError for NaN or infinite values.
TimeSeriesPanel load_panel_csv(const std::filesystem::path& path);

/// Writes a panel in the format load_panel_csv() reads; values round-trip exactly.
void save_panel_csv(const TimeSeriesPanel& panel, const std::filesystem::path& path);

/// TE matrix as CSV: first header cell "from/to", one row per source, one
/// column per target, clamped values with 4 decimals and "--" where no
/// estimate exists (the diagonal). `labels` maps ProcessId::index to a label.
void save_te_matrix_csv(const TEMatrix& m, const std::vector<std::string>& labels, const std::filesystem::path& path);

/// Inverse of save_te_matrix_csv(); row/column labels are resolved in
/// `labels`. Loaded entries are the printed (rounded) values.
TEMatrix load_te_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& labels);

struct ReportBundle {
  std::vector<std::string> labels;  // indexed by ProcessId::index
  std::vector<ProcessId> sources;
  std::vector<ProcessId> targets;
  std::vector<select::RedundancyReport> reports;
  TEMatrix to_targets;
  TEMatrix among_sources;
  nlohmann::json config = nlohmann::json::object();  // effective configuration echo
  std::uint64_t seed = 0;
  std::string generated_at;  // excluded from reproducibility comparisons
};

nlohmann::json to_json(const ReportBundle& b);

void save_reports_json(const ReportBundle& b, const std::filesystem::path& path);

/// Writes curves.csv, hidden_histogram.csv, relevant_histogram.csv and
/// target_relevant_histogram.csv into out_dir (created if missing). Histograms
/// have one row per bundle source. Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const ReportBundle& b, const std::filesystem::path& out_dir);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace tered::io
