#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace proedscan {

// A UTC instant as seconds since the Unix epoch. All pipeline timestamps
// are normalized to UTC; an asset's calendar day is its UTC day.
struct UtcInstant {
    std::int64_t epoch_seconds = 0;

    friend auto operator<=>(const UtcInstant&, const UtcInstant&) = default;
};

struct CivilDate {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
};

struct MonthKey {
    int year = 1970;
    int month = 1; // 1..12

    // Absolute month index; stable across ranges, used for RNG substreams.
    std::int64_t linear_index() const { return std::int64_t(year) * 12 + (month - 1); }

    friend auto operator<=>(const MonthKey&, const MonthKey&) = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

// Proleptic Gregorian calendar <-> days since 1970-01-01.
std::int64_t civil_to_days(int year, int month, int day);
CivilDate days_to_civil(std::int64_t days);

inline CivilDate utc_date_of(UtcInstant t) {
    std::int64_t days = t.epoch_seconds / 86400;
    if (t.epoch_seconds % 86400 < 0) --days;
    return days_to_civil(days);
}

// Strict ISO-8601 subset: YYYY-MM-DD[T ]HH:MM:SS[.fff...][Z|±HH:MM|±HHMM].
// Fractional seconds are truncated; a missing offset means UTC.
std::optional<UtcInstant> parse_iso8601(const std::string& text);

// Canonical form: YYYY-MM-DDTHH:MM:SSZ.
std::string format_iso8601(UtcInstant t);

// "YYYY-MM" month keys as used by plan files and CLI flags.
std::optional<MonthKey> parse_month_key(const std::string& text);
std::string format_month_key(MonthKey m);

// Next calendar month (rolls the year).
MonthKey next_month(MonthKey m);

} // namespace proedscan
