// SPDX-License-Identifier: Apache-2.0

#include "omorilab/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "omorilab/errors.hpp"

namespace omorilab {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[static_cast<std::size_t>(m - 1)];
}

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error("invalid date component '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

Date::Date(int year, int month, int day) {
    if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1 ||
        day > days_in_month(year, month)) {
        throw Error("invalid date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                    std::to_string(day));
    }
    key_ = year * 10000 + month * 100 + day;
}

Date Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
        throw Error("date '" + std::string(iso) + "' is not ISO-8601 (YYYY-MM-DD)");
    }
    return Date(parse_int(iso.substr(0, 4)), parse_int(iso.substr(5, 2)), parse_int(iso.substr(8, 2)));
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year(), month(), day());
    return buf;
}

int Date::weekday() const {
    // Sakamoto's method, shifted so 0 = Monday.
    static constexpr std::array<int, 12> kOffset = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
    int y = year();
    int m = month();
    if (m < 3) y -= 1;
    int dow_sun0 = (y + y / 4 - y / 100 + y / 400 + kOffset[static_cast<std::size_t>(m - 1)] + day()) % 7;
    return (dow_sun0 + 6) % 7;
}

Date Date::next_day() const {
    int y = year(), m = month(), d = day() + 1;
    if (d > days_in_month(y, m)) {
        d = 1;
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    return Date(y, m, d);
}

Date Date::prev_day() const {
    int y = year(), m = month(), d = day() - 1;
    if (d < 1) {
        if (--m < 1) {
            m = 12;
            --y;
        }
        d = days_in_month(y, m);
    }
    return Date(y, m, d);
}

Date Date::next_business_day() const {
    Date d = next_day();
    while (d.is_weekend()) d = d.next_day();
    return d;
}

Date Date::prev_business_day() const {
    Date d = prev_day();
    while (d.is_weekend()) d = d.prev_day();
    return d;
}

} // namespace omorilab
