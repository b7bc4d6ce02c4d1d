#pragma once

#include <optional>
#include <string>

#include "sentidrift/label.hpp"
#include "sentidrift/timestamp.hpp"

namespace sentidrift {

/// Topic assigned to comments that arrive without one.
inline constexpr std::string_view kUnlabeledTopic = "UNLABELED";

struct Comment {
    std::string id;
    bool id_synthesized = false;
    EpochMillis timestamp = 0;
    std::string text;
    std::optional<SentimentLabel> label;
    std::string topic{kUnlabeledTopic};
};

} // namespace sentidrift
