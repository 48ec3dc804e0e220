#include "proedscan/timeutil.hpp"

#include <cctype>
#include <cstdio>

namespace proedscan {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

// Howard Hinnant's days-from-civil / civil-from-days algorithms.
std::int64_t civil_to_days(int year, int month, int day) {
    const std::int64_t y = year - (month <= 2);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = unsigned(y - era * 400);
    const unsigned doy = (153u * unsigned(month + (month > 2 ? -3 : 9)) + 2) / 5 + unsigned(day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + std::int64_t(doe) - 719468;
}

CivilDate days_to_civil(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = unsigned(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = std::int64_t(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{int(y + (m <= 2)), int(m), int(d)};
}

namespace {

bool all_digits(const std::string& s, std::size_t begin, std::size_t count) {
    if (begin + count > s.size()) return false;
    for (std::size_t i = begin; i < begin + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

int num(const std::string& s, std::size_t begin, std::size_t count) {
    int v = 0;
    for (std::size_t i = begin; i < begin + count; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

} // namespace

std::optional<UtcInstant> parse_iso8601(const std::string& text) {
    // date part
    if (!all_digits(text, 0, 4) || text.size() < 19) return std::nullopt;
    if (text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!all_digits(text, 5, 2) || !all_digits(text, 8, 2)) return std::nullopt;
    const int year = num(text, 0, 4);
    const int month = num(text, 5, 2);
    const int day = num(text, 8, 2);
    if (month < 1 || month > 12) return std::nullopt;
    if (day < 1 || day > days_in_month(year, month)) return std::nullopt;

    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    if (!all_digits(text, 11, 2) || text[13] != ':' || !all_digits(text, 14, 2) ||
        text[16] != ':' || !all_digits(text, 17, 2)) {
        return std::nullopt;
    }
    const int hour = num(text, 11, 2);
    const int minute = num(text, 14, 2);
    const int second = num(text, 17, 2);
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t frac_begin = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == frac_begin) return std::nullopt;
    }

    int offset_seconds = 0;
    if (pos < text.size()) {
        const char c = text[pos];
        if (c == 'Z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            ++pos;
            if (!all_digits(text, pos, 2)) return std::nullopt;
            const int oh = num(text, pos, 2);
            pos += 2;
            if (pos < text.size() && text[pos] == ':') ++pos;
            if (!all_digits(text, pos, 2)) return std::nullopt;
            const int om = num(text, pos, 2);
            pos += 2;
            if (oh > 23 || om > 59) return std::nullopt;
            offset_seconds = (oh * 3600 + om * 60) * (c == '-' ? -1 : 1);
        } else {
            return std::nullopt;
        }
    }
    if (pos != text.size()) return std::nullopt;

    const std::int64_t days = civil_to_days(year, month, day);
    // clamp leap second to :59 so round trips stay in range
    const int sec = second == 60 ? 59 : second;
    return UtcInstant{days * 86400 + hour * 3600 + minute * 60 + sec - offset_seconds};
}

std::string format_iso8601(UtcInstant t) {
    std::int64_t days = t.epoch_seconds / 86400;
    std::int64_t rem = t.epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    const CivilDate d = days_to_civil(days);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year, d.month, d.day,
                  int(rem / 3600), int(rem % 3600 / 60), int(rem % 60));
    return buf;
}

std::optional<MonthKey> parse_month_key(const std::string& text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    if (!all_digits(text, 0, 4) || !all_digits(text, 5, 2)) return std::nullopt;
    MonthKey m{num(text, 0, 4), num(text, 5, 2)};
    if (m.month < 1 || m.month > 12) return std::nullopt;
    return m;
}

std::string format_month_key(MonthKey m) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", m.year, m.month);
    return buf;
}

MonthKey next_month(MonthKey m) {
    if (m.month == 12) return MonthKey{m.year + 1, 1};
    return MonthKey{m.year, m.month + 1};
}

} // namespace proedscan
