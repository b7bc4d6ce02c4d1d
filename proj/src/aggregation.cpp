#include "sentidrift/aggregation.hpp"

#include <stdexcept>

namespace sentidrift {

WindowScore aggregate_window(const Window& window) {
    if (window.members.empty()) throw std::invalid_argument("aggregate_window: empty window");
    WindowScore ws;
    ws.index = window.index;
    ws.count = window.members.size();
    ws.gap_before = window.gap_before;
    ws.partial = window.partial;

    LabelCounts total;
    for (const auto& m : window.members) {
        total.add(m.score);
        auto it = ws.topic_scores.find(m.comment.topic);
        if (it == ws.topic_scores.end()) it = ws.topic_scores.emplace(m.comment.topic, TopicScore{}).first;
        it->second.counts.add(m.score);
    }
    for (auto& [topic, ts] : ws.topic_scores) ts.score = ts.counts.mean();
    ws.exact = total.exact_mean();
    ws.score = ws.exact.to_double();
    return ws;
}

std::optional<double> aggregate_topic(const Window& window, std::string_view topic) {
    LabelCounts counts;
    for (const auto& m : window.members) {
        if (m.comment.topic == topic) counts.add(m.score);
    }
    if (counts.n == 0) return std::nullopt;
    return counts.mean();
}

std::vector<WindowScore> score_series(std::span<const Window> windows) {
    std::vector<WindowScore> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back(aggregate_window(w));
    return out;
}

WindowScore make_window_score(std::size_t index, std::size_t count, Fraction exact, bool gap_before) {
    WindowScore ws;
    ws.index = index;
    ws.count = count;
    ws.exact = exact;
    ws.score = exact.to_double();
    ws.gap_before = gap_before;
    return ws;
}

} // namespace sentidrift
