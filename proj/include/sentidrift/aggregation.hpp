#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentidrift/fraction.hpp"
#include "sentidrift/windowing.hpp"

namespace sentidrift {

/// Label tallies for one group of comments. Scores are derived from these
/// counts by a single division.
struct LabelCounts {
    std::int64_t n = 0;
    std::int64_t positive = 0;
    std::int64_t negative = 0;

    void add(int score) noexcept {
        ++n;
        positive += score > 0;
        negative += score < 0;
    }
    [[nodiscard]] std::int64_t net() const noexcept { return positive - negative; }
    /// (positive - negative) / n; n must be positive.
    [[nodiscard]] Fraction exact_mean() const { return Fraction(net(), n); }
    [[nodiscard]] double mean() const { return exact_mean().to_double(); }
};

struct TopicScore {
    LabelCounts counts;
    double score = 0.0;
};

struct WindowScore {
    std::size_t index = 0;
    std::size_t count = 0;
    /// S as an exact ratio; `score` is its rounded value.
    Fraction exact;
    double score = 0.0;
    /// Every topic present in the window, UNLABELED included. Absent topics
    /// have no entry.
    std::map<std::string, TopicScore, std::less<>> topic_scores;
    bool gap_before = false;
    bool partial = false;
};

/// Mean sentiment of the window and of each topic inside it.
/// Throws std::invalid_argument for an empty window.
WindowScore aggregate_window(const Window& window);

/// Mean over members tagged `topic`; nullopt when there are none.
std::optional<double> aggregate_topic(const Window& window, std::string_view topic);

std::vector<WindowScore> score_series(std::span<const Window> windows);

/// A window score carrying only a value (imported series, fixtures).
/// `exact` is taken as given and `score` is derived from it.
WindowScore make_window_score(std::size_t index, std::size_t count, Fraction exact, bool gap_before = false);

} // namespace sentidrift
