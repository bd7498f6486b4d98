#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace stormcast {

using Date = std::chrono::year_month_day;

inline Date make_date(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline Date shift_days(const Date& d, int n) {
    return Date{std::chrono::sys_days{d} + std::chrono::days{n}};
}

inline Date next_day(const Date& d) { return shift_days(d, 1); }
inline Date prev_day(const Date& d) { return shift_days(d, -1); }

std::string format_date(const Date& d);                    // ISO-8601, YYYY-MM-DD
std::optional<Date> parse_date(std::string_view iso);      // "2012-03-07"
std::optional<Date> parse_compact_date(std::string_view s); // "20120307"

} // namespace stormcast
