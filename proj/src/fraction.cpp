#include "sentidrift/fraction.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "sentidrift/error.hpp"

namespace sentidrift {

Fraction parse_decimal(std::string_view text) {
    const std::string original(text);
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    int significant = 0;
    int places = 0;
    bool seen_point = false;
    bool any_digit = false;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') throw ParseError("not a decimal number: '" + original + "'");
        any_digit = true;
        if (num != 0 || c != '0') ++significant;
        if (seen_point) ++places;
        if (significant > 18 || places > 18)
            throw ParseError("too many digits for an exact decimal: '" + original + "'");
        num = num * 10 + (c - '0');
        if (seen_point) den *= 10;
    }
    if (!any_digit) throw ParseError("not a decimal number: '" + original + "'");
    return Fraction(negative ? -num : num, den);
}

Fraction fraction_for(double value, std::int64_t hint_den) {
    if (!std::isfinite(value)) throw ParseError("non-finite score");
    if (hint_den > 0 && hint_den < (std::int64_t{1} << 53)) {
        const double scaled = std::nearbyint(value * static_cast<double>(hint_den));
        if (std::fabs(scaled) < 9.0e15) {
            const auto num = static_cast<std::int64_t>(scaled);
            if (Fraction(num, hint_den).to_double() == value) return Fraction(num, hint_den);
        }
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    if (res.ec != std::errc{}) throw ParseError("score cannot be represented exactly");
    return parse_decimal(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

} // namespace sentidrift
