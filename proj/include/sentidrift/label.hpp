#pragma once

#include <array>
#include <string_view>

namespace sentidrift {

enum class SentimentLabel { Negative, Neutral, Positive };

inline constexpr std::array<SentimentLabel, 3> kAllLabels{
    SentimentLabel::Negative, SentimentLabel::Neutral, SentimentLabel::Positive};

/// Negative -> -1, Neutral -> 0, Positive -> +1.
constexpr int map_label_to_score(SentimentLabel label) noexcept {
    switch (label) {
    case SentimentLabel::Negative: return -1;
    case SentimentLabel::Neutral: return 0;
    case SentimentLabel::Positive: return 1;
    }
    return 0;
}

constexpr std::string_view label_name(SentimentLabel label) noexcept {
    switch (label) {
    case SentimentLabel::Negative: return "negative";
    case SentimentLabel::Neutral: return "neutral";
    case SentimentLabel::Positive: return "positive";
    }
    return "neutral";
}

/// Case-insensitive match on negative / neutral / positive; surrounding
/// whitespace is ignored. Throws ParseError listing the accepted values.
SentimentLabel parse_label(std::string_view raw);

} // namespace sentidrift
