#ifndef EMICAST_DATE_HPP
#define EMICAST_DATE_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "emicast/core.hpp"

namespace emicast {

namespace detail {

// Civil-calendar conversions on a proleptic Gregorian calendar.
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

inline bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int y, int m) {
    static constexpr int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

} // namespace detail

/// Calendar date stored as days since 1970-01-01.
class Date {
public:
    Date() = default;

    Date(int year, int month, int day) {
        if (month < 1 || month > 12 || day < 1 || day > detail::days_in_month(year, month))
            fail(ErrorCode::BadArgument, "invalid calendar date");
        days_ = detail::days_from_civil(year, month, day);
    }

    static Date from_days(std::int64_t days) {
        Date d;
        d.days_ = days;
        return d;
    }

    std::int64_t days() const noexcept { return days_; }

    int year() const {
        int y, m, d;
        detail::civil_from_days(days_, y, m, d);
        return y;
    }

    Date plus_days(std::int64_t n) const { return from_days(days_ + n); }

    std::string iso() const {
        int y, m, d;
        detail::civil_from_days(days_, y, m, d);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        return buf;
    }

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

/// Parse `text` against a format of %Y/%m/%d tokens and literal separators,
/// e.g. "%Y-%m-%d" or "%d/%m/%Y". Returns nullopt on any mismatch or an
/// impossible calendar date.
inline std::optional<Date> parse_date(std::string_view text, std::string_view format = "%Y-%m-%d") {
    int year = -1, month = -1, day = -1;
    std::size_t pos = 0;

    auto read_int = [&](int min_digits, int max_digits) -> std::optional<int> {
        int value = 0, digits = 0;
        while (pos < text.size() && digits < max_digits && text[pos] >= '0' && text[pos] <= '9') {
            value = value * 10 + (text[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits < min_digits) return std::nullopt;
        return value;
    };

    for (std::size_t f = 0; f < format.size(); ++f) {
        if (format[f] == '%' && f + 1 < format.size()) {
            ++f;
            std::optional<int> v;
            switch (format[f]) {
                case 'Y': v = read_int(4, 4); if (v) year = *v; break;
                case 'm': v = read_int(1, 2); if (v) month = *v; break;
                case 'd': v = read_int(1, 2); if (v) day = *v; break;
                default: return std::nullopt;
            }
            if (!v) return std::nullopt;
        } else {
            if (pos >= text.size() || text[pos] != format[f]) return std::nullopt;
            ++pos;
        }
    }
    if (pos != text.size()) return std::nullopt;
    if (year < 0 || month < 1 || month > 12 || day < 1 ||
        day > detail::days_in_month(year, month))
        return std::nullopt;
    return Date(year, month, day);
}

} // namespace emicast

#endif // EMICAST_DATE_HPP
