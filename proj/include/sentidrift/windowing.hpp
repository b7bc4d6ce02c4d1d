#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sentidrift/scorer.hpp"
#include "sentidrift/timestamp.hpp"

namespace sentidrift {

struct CountBased {
    std::size_t size = 100;
};

struct TimeBased {
    EpochMillis duration_ms = kMillisPerDay;
    /// Defaults to the UTC midnight at or before the first comment.
    std::optional<EpochMillis> origin;
};

enum class PartialPolicy { Drop, Keep };

struct WindowSpec {
    std::variant<CountBased, TimeBased> mode = CountBased{};
    PartialPolicy partial = PartialPolicy::Drop;
};

/// Inclusive ordinals into the sorted comment sequence.
struct OrdinalBounds {
    std::size_t first = 0;
    std::size_t last = 0;
};

/// Half-open [start_ms, end_ms).
struct TimeBounds {
    EpochMillis start_ms = 0;
    EpochMillis end_ms = 0;
};

/// A window views a contiguous run of the sorted sequence it was cut from;
/// that sequence must outlive it.
struct Window {
    std::size_t index = 0;
    std::span<const ScoredComment> members;
    std::variant<OrdinalBounds, TimeBounds> bounds;
    bool partial = false;
    bool gap_before = false;
};

/// Stable sort by timestamp.
void sort_by_time(std::vector<ScoredComment>& comments);

/// Consecutive chunks of exactly `size`; the trailing remainder is dropped or
/// kept as a partial window. Throws ConfigError when size is 0.
std::vector<Window> segment_count(std::span<const ScoredComment> sorted, std::size_t size,
                                  PartialPolicy partial = PartialPolicy::Drop);

/// Tumbling buckets floor((t - origin) / duration). Empty buckets are not
/// emitted; the next emitted window carries gap_before. Throws ConfigError
/// when duration_ms < 1.
std::vector<Window> segment_time(std::span<const ScoredComment> sorted, EpochMillis duration_ms,
                                 std::optional<EpochMillis> origin = std::nullopt);

std::vector<Window> segment(std::span<const ScoredComment> sorted, const WindowSpec& spec);

void validate(const WindowSpec& spec);

} // namespace sentidrift
