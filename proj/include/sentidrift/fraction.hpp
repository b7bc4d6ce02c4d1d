#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string_view>

namespace sentidrift {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Window scores are ratios of integer counts, so differences between
/// windows can be formed exactly and rounded to double once.
class Fraction {
public:
    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t num, std::int64_t den = 1) { assign(num, den); }

    [[nodiscard]] constexpr std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const noexcept { return den_; }

    /// Correctly rounded when both terms are below 2^53 in magnitude.
    [[nodiscard]] double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend constexpr Fraction operator+(const Fraction& a, const Fraction& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend constexpr Fraction operator-(const Fraction& a, const Fraction& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend constexpr Fraction operator-(const Fraction& a) { return Fraction(-a.num_, a.den_); }

    friend constexpr bool operator==(const Fraction&, const Fraction&) = default;
    friend constexpr bool operator<(const Fraction& a, const Fraction& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }

private:
    constexpr void assign(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::domain_error("fraction with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    static constexpr __int128 gcd_wide(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static constexpr Fraction from_wide(__int128 num, __int128 den) {
        const __int128 g = gcd_wide(num, den);
        num /= g;
        den /= g;
        constexpr __int128 lo = INT64_MIN;
        constexpr __int128 hi = INT64_MAX;
        if (num < lo || num > hi || den > hi) throw std::overflow_error("fraction overflow");
        Fraction f;
        f.num_ = static_cast<std::int64_t>(num);
        f.den_ = static_cast<std::int64_t>(den);
        return f;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Parses a plain decimal literal ("-0.13", "0.5", "1") into an exact fraction.
/// Exponent notation and more than 18 significant digits are rejected.
Fraction parse_decimal(std::string_view text);

/// Exact fraction for a finite double: `num/den` when `value == num/den` holds
/// for the given denominator, otherwise the exact decimal of its shortest
/// round-trip representation.
Fraction fraction_for(double value, std::int64_t hint_den);

} // namespace sentidrift
