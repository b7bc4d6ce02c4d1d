#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentidrift/aggregation.hpp"
#include "sentidrift/detection.hpp"

namespace sentidrift {

// ---------------------------------------------------------------------------
// Complaint-reason distribution

enum class LabelFilter { NegativeOnly, All };

struct TopicShare {
    std::string topic;
    std::size_t anomalous_count = 0;
    std::size_t normal_count = 0;
    std::optional<double> anomalous_proportion; ///< absent when the group is empty
    std::optional<double> normal_proportion;
};

struct ReasonDistribution {
    std::vector<TopicShare> topics; ///< descending by total count, then name
    std::size_t anomalous_comment_count = 0;
    std::size_t normal_comment_count = 0;
};

/// Splits the selected comments by whether their window is flagged and
/// computes per-topic shares inside each group.
ReasonDistribution reason_distribution(std::span<const Window> windows, const AnomalyReport& report,
                                       LabelFilter filter = LabelFilter::NegativeOnly);

// ---------------------------------------------------------------------------
// Topic trajectories and heatmap

struct TrajectoryPoint {
    std::size_t window_index = 0;
    double score = 0.0;
};

/// Points exist only for windows containing the topic; missing windows are gaps.
struct TopicTrajectory {
    std::string topic;
    std::vector<TrajectoryPoint> points;
};

struct TrajectorySet {
    std::vector<TopicTrajectory> series;
    std::vector<std::string> warnings;
};

/// Distinct topics seen in `scores`, descending by total comment count then name.
std::vector<std::string> topics_by_volume(std::span<const WindowScore> scores, bool include_unlabeled);

/// One series per requested topic (every topic but UNLABELED when `requested`
/// is empty). `known_topics` defaults to the topics present in `scores`;
/// requesting anything outside it throws ConfigError listing the known topics.
/// A known topic absent from every window yields an empty series and a warning.
TrajectorySet topic_trajectories(std::span<const WindowScore> scores, std::span<const std::string> requested = {},
                                 std::optional<std::vector<std::string>> known_topics = std::nullopt);

struct HeatmapMatrix {
    std::vector<std::string> rows;
    std::vector<std::size_t> columns;
    std::vector<std::optional<double>> cells; ///< row-major

    [[nodiscard]] const std::optional<double>& at(std::size_t row, std::size_t col) const {
        return cells[row * columns.size() + col];
    }
};

/// Rows by descending topic volume, columns by window index; cells absent
/// where the topic does not occur in the window.
HeatmapMatrix heatmap_matrix(std::span<const WindowScore> scores, bool include_unlabeled = false);

// ---------------------------------------------------------------------------
// SVG charts

/// Affine value-to-pixel map shared by the renderers; exposed so callers can
/// invert positions read back from a document.
struct ChartFrame {
    static constexpr double kWidth = 960.0;
    static constexpr double kHeight = 480.0;
    static constexpr double kLeft = 70.0;
    static constexpr double kRight = 30.0;
    static constexpr double kTop = 40.0;
    static constexpr double kBottom = 50.0;

    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;

    [[nodiscard]] double x_px(double x) const;
    [[nodiscard]] double y_px(double y) const;
    [[nodiscard]] double y_value(double px) const;
};

/// Line chart of S over window index with a zero reference line and one
/// marker per flagged window. Throws std::invalid_argument on empty input.
std::string render_trajectory_svg(std::span<const WindowScore> scores, const AnomalyReport& report);

/// Delta spikes with a horizontal line at tau; deltas below it are marked.
/// Throws std::invalid_argument on empty input.
std::string render_delta_svg(const DeltaSeries& deltas, double tau);

} // namespace sentidrift
