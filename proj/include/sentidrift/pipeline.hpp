#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sentidrift/aggregation.hpp"
#include "sentidrift/detection.hpp"
#include "sentidrift/ingest.hpp"
#include "sentidrift/reporting.hpp"
#include "sentidrift/scorer.hpp"
#include "sentidrift/windowing.hpp"

namespace sentidrift {

struct ReportSelection {
    bool window_scores = true;
    bool topic_scores = true;
    bool anomalies = true;
    bool before_after = true;
    bool reasons = true;
    bool heatmap = true;
    bool trajectories = true;
    bool svg = true;
    bool ingest_errors = true;
};

struct PipelineConfig {
    std::filesystem::path input;
    std::optional<InputFormat> format; ///< inferred from the extension when empty
    ScorerMode scorer = PassthroughMode{};
    WindowSpec window;
    ThresholdConfig threshold;
    ReportSelection reports;
    LabelFilter reason_filter = LabelFilter::NegativeOnly;
    std::vector<std::string> trajectory_topics;
    bool include_unlabeled = false;
    std::filesystem::path out_dir;
    /// Streaming only: arrivals older than the newest timestamp by more than
    /// this produce a warning.
    EpochMillis out_of_order_tolerance_ms = 0;
};

/// Throws ConfigError on an invalid window or threshold configuration.
void validate(const PipelineConfig& config);

/// Scored, windowed and thresholded view of a comment set. `windows` views
/// into `scored`, so the object is move-only.
struct Analysis {
    std::vector<ScoredComment> scored;
    std::vector<Window> windows;
    std::vector<WindowScore> scores;
    DeltaSeries deltas;
    AnomalyReport report;
    std::vector<RowError> scoring_errors;

    Analysis() = default;
    Analysis(Analysis&&) noexcept = default;
    Analysis& operator=(Analysis&&) noexcept = default;
    Analysis(const Analysis&) = delete;
    Analysis& operator=(const Analysis&) = delete;
};

/// Score -> sort -> window -> aggregate -> detect.
Analysis analyze_comments(std::vector<Comment> comments, const ScorerMode& scorer, const WindowSpec& window,
                          const ThresholdConfig& threshold);

struct RunSummary {
    IngestSummary ingest;
    std::size_t unscored = 0;
    std::size_t windows = 0;
    AnomalyReport report;
    std::string config_echo; ///< JSON object
    std::vector<std::filesystem::path> artifacts;
};

std::string to_json(const RunSummary& summary);

/// Ingest through report; writes the selected artifacts plus summary.json into
/// config.out_dir. The directory is checked for writability before any work.
/// Fatal errors are rethrown as std::runtime_error prefixed with the stage.
RunSummary run_batch(const PipelineConfig& config);

/// Checks (creating if needed) that `dir` accepts new files. Throws IoError.
void ensure_writable_directory(const std::filesystem::path& dir);

std::string config_echo_json(const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Streaming

struct StreamEvent {
    std::size_t window_index = 0;
    std::size_t count = 0;
    double score = 0.0;
    bool gap_before = false;
    bool partial = false;
    std::optional<Decision> decision;
};

std::string to_json(const StreamEvent& event);

/// Push-based pipeline: comments arrive one at a time in arrival order and a
/// window closes when it is full (count mode) or when a comment from a later
/// bucket arrives (time mode). Decisions come from OnlineDetector.
class StreamRunner {
public:
    explicit StreamRunner(const PipelineConfig& config);

    /// Returns the event for a window this comment closed, if any.
    std::optional<StreamEvent> push(Comment comment);
    /// Flushes the open window (count mode keeps it only with PartialPolicy::Keep).
    std::optional<StreamEvent> finish();

    [[nodiscard]] AnomalyReport report() const { return detector_.report(); }
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    [[nodiscard]] std::size_t duplicates() const noexcept { return duplicates_; }
    [[nodiscard]] std::size_t unscored() const noexcept { return unscored_; }

private:
    std::optional<StreamEvent> close_window(bool partial);

    ScorerMode scorer_;
    WindowSpec window_;
    EpochMillis tolerance_ms_;
    OnlineDetector detector_;
    DuplicateFilter dedup_;
    std::vector<ScoredComment> open_;
    std::optional<std::int64_t> open_bucket_;
    std::optional<EpochMillis> origin_;
    std::optional<EpochMillis> newest_;
    bool pending_gap_ = false;
    std::size_t next_index_ = 0;
    std::size_t duplicates_ = 0;
    std::size_t unscored_ = 0;
    std::vector<std::string> warnings_;
};

struct StreamResult {
    std::vector<StreamEvent> events;
    AnomalyReport report;
    IngestSummary ingest;
    std::size_t unscored = 0;
    std::vector<RowError> errors;
    std::vector<std::string> warnings;
};

/// Reads records lazily from `in` and feeds a StreamRunner.
StreamResult run_stream(const PipelineConfig& config, std::istream& in, InputFormat format);

} // namespace sentidrift
