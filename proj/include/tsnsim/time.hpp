#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace tsnsim {

// All simulation time is carried as signed 64-bit picosecond counts.
// int64 covers roughly +/- 106 days of simulated time, far beyond the
// 10^6 s a long run needs. No floating-point time value crosses a
// module boundary; dimensionless ratios are the only doubles in play.

struct Duration {
    std::int64_t ps = 0;

    friend constexpr auto operator<=>(const Duration&, const Duration&) = default;

    constexpr Duration operator-() const { return Duration{-ps}; }
    constexpr Duration& operator+=(Duration d) { ps += d.ps; return *this; }
    constexpr Duration& operator-=(Duration d) { ps -= d.ps; return *this; }
};

constexpr Duration operator+(Duration a, Duration b) { return Duration{a.ps + b.ps}; }
constexpr Duration operator-(Duration a, Duration b) { return Duration{a.ps - b.ps}; }
constexpr Duration operator*(Duration a, std::int64_t k) { return Duration{a.ps * k}; }
constexpr Duration operator*(std::int64_t k, Duration a) { return Duration{a.ps * k}; }
constexpr Duration operator/(Duration a, std::int64_t k) { return Duration{a.ps / k}; }

constexpr Duration abs(Duration d) { return d.ps < 0 ? Duration{-d.ps} : d; }

/// A point on the simulation's true-time axis (picoseconds since epoch).
struct SimTime {
    std::int64_t ps = 0;

    friend constexpr auto operator<=>(const SimTime&, const SimTime&) = default;

    constexpr SimTime& operator+=(Duration d) { ps += d.ps; return *this; }
};

constexpr SimTime operator+(SimTime t, Duration d) { return SimTime{t.ps + d.ps}; }
constexpr SimTime operator+(Duration d, SimTime t) { return SimTime{t.ps + d.ps}; }
constexpr SimTime operator-(SimTime t, Duration d) { return SimTime{t.ps - d.ps}; }
constexpr Duration operator-(SimTime a, SimTime b) { return Duration{a.ps - b.ps}; }

/// Origin-anchored view of a duration (epoch + d). Scenario times are
/// expressed this way throughout.
constexpr SimTime at(Duration d) { return SimTime{d.ps}; }

namespace literals {
constexpr Duration operator""_ps(unsigned long long v) { return Duration{static_cast<std::int64_t>(v)}; }
constexpr Duration operator""_ns(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * 1000}; }
constexpr Duration operator""_us(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * 1000000}; }
constexpr Duration operator""_ms(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * 1000000000}; }
constexpr Duration operator""_s(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * 1000000000000}; }
} // namespace literals

/// Floor division that rounds toward negative infinity for negatives.
constexpr std::int64_t floor_div(std::int64_t num, std::int64_t den)
{
    std::int64_t q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

/// Quantize a local reading down to the nearest multiple of `gran`.
constexpr SimTime floor_to(SimTime t, Duration gran)
{
    return SimTime{floor_div(t.ps, gran.ps) * gran.ps};
}

/// Scale an integer duration by a dimensionless ratio, rounding to the
/// nearest picosecond. The only sanctioned float-to-time crossing.
inline Duration scale_round(Duration d, double ratio)
{
    if (ratio == 1.0) return d;
    return Duration{static_cast<std::int64_t>(std::llround(static_cast<double>(d.ps) * ratio))};
}

/// Parse a duration literal: an integer (picoseconds) with an optional
/// unit suffix ps/ns/us/ms/s. Returns nullopt on malformed input.
inline std::optional<Duration> parse_duration(std::string_view text)
{
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (text[0] == '-' || text[0] == '+') {
        neg = text[0] == '-';
        i = 1;
    }
    std::int64_t whole = 0;
    std::size_t digits = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
        whole = whole * 10 + (text[i] - '0');
    }
    if (digits == 0) return std::nullopt;
    // Optional fractional part, e.g. "1.5ms"; resolved against the unit.
    std::int64_t frac_num = 0;
    std::int64_t frac_den = 1;
    if (i < text.size() && text[i] == '.') {
        ++i;
        std::size_t fdigits = 0;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++fdigits) {
            frac_num = frac_num * 10 + (text[i] - '0');
            frac_den *= 10;
        }
        if (fdigits == 0) return std::nullopt;
    }
    std::string_view unit = text.substr(i);
    std::int64_t mult;
    if (unit.empty() || unit == "ps") mult = 1;
    else if (unit == "ns") mult = 1000;
    else if (unit == "us") mult = 1000000;
    else if (unit == "ms") mult = 1000000000;
    else if (unit == "s") mult = 1000000000000;
    else return std::nullopt;
    if (frac_num != 0 && (mult * frac_num) % frac_den != 0) return std::nullopt;
    std::int64_t ps = whole * mult + (frac_num * mult) / frac_den;
    return Duration{neg ? -ps : ps};
}

/// Render picoseconds with the largest unit that divides it evenly.
inline std::string format_duration(Duration d)
{
    std::int64_t v = d.ps;
    const char* unit = "ps";
    for (auto [m, u] : {std::pair<std::int64_t, const char*>{1000000000000, "s"},
                        {1000000000, "ms"},
                        {1000000, "us"},
                        {1000, "ns"}}) {
        if (v != 0 && v % m == 0) {
            v /= m;
            unit = u;
            break;
        }
    }
    return std::to_string(v) + unit;
}

} // namespace tsnsim
