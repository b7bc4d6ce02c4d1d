#include "sentidrift/windowing.hpp"

#include <algorithm>

#include "sentidrift/error.hpp"

namespace sentidrift {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

} // namespace

void sort_by_time(std::vector<ScoredComment>& comments) {
    std::stable_sort(comments.begin(), comments.end(), [](const ScoredComment& a, const ScoredComment& b) {
        return a.comment.timestamp < b.comment.timestamp;
    });
}

std::vector<Window> segment_count(std::span<const ScoredComment> sorted, std::size_t size, PartialPolicy partial) {
    if (size == 0) throw ConfigError("window size must be at least 1");
    std::vector<Window> windows;
    windows.reserve(sorted.size() / size + 1);
    for (std::size_t first = 0; first < sorted.size(); first += size) {
        const std::size_t len = std::min(size, sorted.size() - first);
        const bool is_partial = len < size;
        if (is_partial && partial == PartialPolicy::Drop) break;
        Window w;
        w.index = windows.size();
        w.members = sorted.subspan(first, len);
        w.bounds = OrdinalBounds{first, first + len - 1};
        w.partial = is_partial;
        windows.push_back(w);
    }
    return windows;
}

std::vector<Window> segment_time(std::span<const ScoredComment> sorted, EpochMillis duration_ms,
                                 std::optional<EpochMillis> origin) {
    if (duration_ms < 1) throw ConfigError("window duration must be at least 1 ms");
    std::vector<Window> windows;
    if (sorted.empty()) return windows;
    const EpochMillis base = origin ? *origin : utc_midnight_floor(sorted.front().comment.timestamp);

    std::size_t first = 0;
    std::optional<std::int64_t> previous_bucket;
    while (first < sorted.size()) {
        const std::int64_t bucket = floor_div(sorted[first].comment.timestamp - base, duration_ms);
        const EpochMillis start = base + bucket * duration_ms;
        const EpochMillis end = start + duration_ms;
        std::size_t last = first;
        while (last < sorted.size() && sorted[last].comment.timestamp < end) ++last;

        Window w;
        w.index = windows.size();
        w.members = sorted.subspan(first, last - first);
        w.bounds = TimeBounds{start, end};
        w.gap_before = previous_bucket && bucket > *previous_bucket + 1;
        windows.push_back(w);

        previous_bucket = bucket;
        first = last;
    }
    return windows;
}

void validate(const WindowSpec& spec) {
    if (const auto* c = std::get_if<CountBased>(&spec.mode)) {
        if (c->size == 0) throw ConfigError("window size must be at least 1");
    } else if (std::get<TimeBased>(spec.mode).duration_ms < 1) {
        throw ConfigError("window duration must be at least 1 ms");
    }
}

std::vector<Window> segment(std::span<const ScoredComment> sorted, const WindowSpec& spec) {
    if (const auto* c = std::get_if<CountBased>(&spec.mode)) return segment_count(sorted, c->size, spec.partial);
    const auto& t = std::get<TimeBased>(spec.mode);
    return segment_time(sorted, t.duration_ms, t.origin);
}

} // namespace sentidrift
