#include "stormcast/date.hpp"

#include <charconv>
#include <cstdio>

namespace stormcast {

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u",
                  int(d.year()), unsigned(d.month()), unsigned(d.day()));
    return buf;
}

namespace {

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<Date> make_checked(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    Date date = make_date(y, unsigned(m), unsigned(d));
    if (!date.ok()) return std::nullopt;
    return date;
}

} // namespace

std::optional<Date> parse_date(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
    auto y = parse_int(iso.substr(0, 4));
    auto m = parse_int(iso.substr(5, 2));
    auto d = parse_int(iso.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    return make_checked(*y, *m, *d);
}

std::optional<Date> parse_compact_date(std::string_view s) {
    if (s.size() != 8) return std::nullopt;
    auto y = parse_int(s.substr(0, 4));
    auto m = parse_int(s.substr(4, 2));
    auto d = parse_int(s.substr(6, 2));
    if (!y || !m || !d) return std::nullopt;
    return make_checked(*y, *m, *d);
}

} // namespace stormcast
