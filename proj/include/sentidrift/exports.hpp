#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentidrift/aggregation.hpp"
#include "sentidrift/detection.hpp"
#include "sentidrift/ingest.hpp"
#include "sentidrift/reporting.hpp"

namespace sentidrift {

/// Shortest decimal that round-trips to the same double.
std::string format_real(double value);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(std::string_view value);

/// Writes to a sibling temporary file, then renames over `path`.
/// Throws IoError on failure.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

// Artifact formats. All outputs are deterministic for identical input.

/// `window,count,score,gap_before`
std::string window_scores_csv(std::span<const WindowScore> scores);
/// `window,topic,count,score`
std::string topic_scores_csv(std::span<const WindowScore> scores);
/// `window,previous_score,current_score,delta`
std::string before_after_csv(const AnomalyReport& report);
/// Fixed-width table rounded to two decimals, for terminals.
std::string before_after_table(const AnomalyReport& report);
std::string anomaly_report_json(const AnomalyReport& report);
/// `topic,anomalous_proportion,normal_proportion,anomalous_count,normal_count`
std::string reason_distribution_csv(const ReasonDistribution& dist);
/// Wide format: `topic,<window>...`, empty cell when absent.
std::string heatmap_csv(const HeatmapMatrix& matrix);
/// Long format: `topic,window,score`.
std::string trajectories_csv(const TrajectorySet& set);
/// `line,reason`
std::string row_errors_csv(std::span<const RowError> errors);
/// `id,timestamp,label,score,topic,text`
std::string scored_comments_csv(std::span<const ScoredComment> comments);

/// Reads a `window,count,score[,gap_before]` file. When `score` equals
/// m/count for an integer m, the exact fraction m/count is kept; otherwise the
/// decimal literal is taken exactly. Throws ParseError with the line number.
std::vector<WindowScore> read_window_scores(std::istream& in);
std::vector<WindowScore> read_window_scores_file(const std::filesystem::path& path);

} // namespace sentidrift
