// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_DATES_HPP
#define OMORILAB_DATES_HPP

#include <compare>
#include <string>
#include <string_view>

namespace omorilab {

/// Calendar date used as a join key. No timezone arithmetic anywhere:
/// dates are opaque ordered labels, trading-day offsets are always
/// computed through a TradingCalendar index.
class Date {
public:
    Date() = default;
    Date(int year, int month, int day);

    /// Parse a strict ISO-8601 date (YYYY-MM-DD). Throws Error on anything else.
    static Date parse(std::string_view iso);

    std::string to_string() const; // YYYY-MM-DD

    int year() const { return key_ / 10000; }
    int month() const { return key_ / 100 % 100; }
    int day() const { return key_ % 100; }

    bool valid() const { return key_ != 0; }

    /// 0 = Monday .. 6 = Sunday.
    int weekday() const;
    bool is_weekend() const { return weekday() >= 5; }

    Date next_day() const;
    Date prev_day() const;
    /// Next / previous Monday-Friday date strictly after/before this one.
    Date next_business_day() const;
    Date prev_business_day() const;

    auto operator<=>(const Date&) const = default;

private:
    int key_ = 0; // yyyymmdd; 0 = unset
};

} // namespace omorilab

#endif
