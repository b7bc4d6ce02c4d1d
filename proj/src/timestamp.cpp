#include "sentidrift/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <limits>

#include "sentidrift/error.hpp"

namespace sentidrift {
namespace {

constexpr std::string_view kAcceptedFormats =
    "accepted: RFC-3339/ISO-8601 (e.g. 2015-02-24T11:35:52Z, 2015-02-24 11:35:52 -0800, 2015-02-24) "
    "or non-negative epoch seconds/milliseconds";

[[noreturn]] void fail(std::string_view raw) {
    throw ParseError("unparseable timestamp '" + std::string(raw) + "'; " + std::string(kAcceptedFormats));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads exactly `width` digits at `pos`.
bool read_fixed(std::string_view s, std::size_t& pos, int width, int& out) {
    if (pos + static_cast<std::size_t>(width) > s.size()) return false;
    int v = 0;
    for (int i = 0; i < width; ++i) {
        const char c = s[pos + static_cast<std::size_t>(i)];
        if (!is_digit(c)) return false;
        v = v * 10 + (c - '0');
    }
    pos += static_cast<std::size_t>(width);
    out = v;
    return true;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!is_digit(c)) return false;
    return true;
}

EpochMillis parse_epoch(std::string_view s, std::string_view raw) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) fail(raw);
    if (v >= 100'000'000'000LL) return v;
    return v * 1000;
}

// Offset in minutes east of UTC; `pos` sits just after the time part.
bool parse_offset(std::string_view s, std::size_t& pos, int& minutes) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos == s.size()) {
        minutes = 0;
        return true;
    }
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
        minutes = 0;
        return pos == s.size();
    }
    if (s[pos] != '+' && s[pos] != '-') return false;
    const int sign = s[pos] == '-' ? -1 : 1;
    ++pos;
    int hh = 0;
    int mm = 0;
    if (!read_fixed(s, pos, 2, hh)) return false;
    if (pos < s.size()) {
        if (s[pos] == ':') ++pos;
        if (!read_fixed(s, pos, 2, mm)) return false;
    }
    if (pos != s.size() || hh > 23 || mm > 59) return false;
    minutes = sign * (hh * 60 + mm);
    return true;
}

} // namespace

EpochMillis normalize_timestamp(std::string_view raw) {
    const std::string_view s = trim(raw);
    if (s.empty()) fail(raw);
    if (all_digits(s)) return parse_epoch(s, raw);

    std::size_t pos = 0;
    int year = 0;
    int month = 0;
    int day = 0;
    if (!read_fixed(s, pos, 4, year) || pos >= s.size() || s[pos++] != '-' || !read_fixed(s, pos, 2, month) ||
        pos >= s.size() || s[pos++] != '-' || !read_fixed(s, pos, 2, day))
        fail(raw);

    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                                          std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) fail(raw);

    int hour = 0;
    int minute = 0;
    int second = 0;
    int millis = 0;
    int offset_minutes = 0;
    if (pos < s.size()) {
        const char sep = s[pos];
        if (sep != 'T' && sep != 't' && sep != ' ') fail(raw);
        ++pos;
        if (!read_fixed(s, pos, 2, hour) || pos >= s.size() || s[pos++] != ':' || !read_fixed(s, pos, 2, minute))
            fail(raw);
        if (pos < s.size() && s[pos] == ':') {
            ++pos;
            if (!read_fixed(s, pos, 2, second)) fail(raw);
            if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
                ++pos;
                int scale = 100;
                std::size_t digits = 0;
                while (pos < s.size() && is_digit(s[pos])) {
                    if (scale > 0) millis += (s[pos] - '0') * scale;
                    scale /= 10;
                    ++pos;
                    ++digits;
                }
                if (digits == 0) fail(raw);
            }
        }
        if (hour > 23 || minute > 59 || second > 59) fail(raw);
        if (!parse_offset(s, pos, offset_minutes)) fail(raw);
    }

    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    const EpochMillis ms = static_cast<EpochMillis>(days) * kMillisPerDay +
                           (static_cast<EpochMillis>(hour) * 3600 + minute * 60 + second) * 1000 + millis -
                           static_cast<EpochMillis>(offset_minutes) * 60'000;
    if (ms < 0) throw ParseError("timestamp before 1970-01-01T00:00:00Z: '" + std::string(raw) + "'");
    return ms;
}

std::string format_rfc3339(EpochMillis ms) {
    const EpochMillis day_index = ms >= 0 ? ms / kMillisPerDay : (ms - kMillisPerDay + 1) / kMillisPerDay;
    const EpochMillis in_day = ms - day_index * kMillisPerDay;
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day_index}}};
    const auto secs = in_day / 1000;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(secs / 3600), static_cast<long long>((secs / 60) % 60),
                  static_cast<long long>(secs % 60), static_cast<long long>(in_day % 1000));
    return buf;
}

EpochMillis utc_midnight_floor(EpochMillis ms) {
    const EpochMillis r = ms % kMillisPerDay;
    return r >= 0 ? ms - r : ms - r - kMillisPerDay;
}

EpochMillis parse_duration(std::string_view text) {
    const std::string_view s = trim(text);
    std::size_t split = 0;
    while (split < s.size() && is_digit(s[split])) ++split;
    if (split == 0) throw ConfigError("invalid duration '" + std::string(text) + "' (expected e.g. 1d, 6h, 30m, 45s, 250ms)");
    std::int64_t value = 0;
    const auto res = std::from_chars(s.data(), s.data() + split, value);
    if (res.ec != std::errc{}) throw ConfigError("invalid duration '" + std::string(text) + "'");
    const std::string_view unit = s.substr(split);
    std::int64_t scale = 0;
    if (unit.empty() || unit == "ms") scale = 1;
    else if (unit == "s") scale = 1000;
    else if (unit == "m" || unit == "min") scale = 60'000;
    else if (unit == "h") scale = 3'600'000;
    else if (unit == "d") scale = kMillisPerDay;
    else if (unit == "w") scale = 7 * kMillisPerDay;
    else throw ConfigError("invalid duration unit in '" + std::string(text) + "' (use ms, s, m, h, d or w)");
    if (value <= 0) throw ConfigError("window duration must be positive");
    if (value > std::numeric_limits<std::int64_t>::max() / scale) throw ConfigError("window duration too large");
    return value * scale;
}

} // namespace sentidrift
