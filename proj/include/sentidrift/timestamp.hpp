#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sentidrift {

/// UTC epoch milliseconds.
using EpochMillis = std::int64_t;

inline constexpr EpochMillis kMillisPerDay = 86'400'000;

/// Accepts RFC-3339 / ISO-8601 (`2015-02-24T11:35:52Z`, `2015-02-24 11:35:52 -0800`,
/// fractional seconds, date-only) and non-negative integer epochs. Integers
/// >= 10^11 are milliseconds, smaller ones seconds. Strings without an offset
/// are UTC. Throws ParseError otherwise, or for instants before 1970.
EpochMillis normalize_timestamp(std::string_view raw);

/// `YYYY-MM-DDTHH:MM:SS.mmmZ`; round-trips through normalize_timestamp.
std::string format_rfc3339(EpochMillis ms);

/// UTC midnight at or before `ms`.
EpochMillis utc_midnight_floor(EpochMillis ms);

/// Durations like `1d`, `6h`, `30m`, `45s`, `250ms`, `1w`, or bare milliseconds.
/// Throws ConfigError for zero, negative or malformed values.
EpochMillis parse_duration(std::string_view text);

} // namespace sentidrift
