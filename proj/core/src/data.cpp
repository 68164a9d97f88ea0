// SPDX-License-Identifier: Apache-2.0

#include "omorilab/data.hpp"

#include <algorithm>

#include "omorilab/errors.hpp"

namespace omorilab {

TradingCalendar TradingCalendar::from_dates(std::vector<Date> dates) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw Error("calendar dates must be strictly increasing at " + dates[i].to_string());
        }
    }
    TradingCalendar c;
    c.dates_ = std::move(dates);
    return c;
}

std::optional<std::size_t> TradingCalendar::index_of(Date d) const {
    const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

std::optional<std::size_t> DailyBarSeries::index_of(Date d) const {
    const auto it = std::lower_bound(bars.begin(), bars.end(), d,
                                     [](const DailyBar& b, Date x) { return b.date < x; });
    if (it == bars.end() || it->date != d) return std::nullopt;
    return static_cast<std::size_t>(it - bars.begin());
}

std::size_t MinuteSeries::missing_count() const {
    std::size_t n = 0;
    for (auto p : present) {
        if (!p) ++n;
    }
    return n;
}

std::optional<std::size_t> RateSeries::index_of(Date d) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates.begin());
}

} // namespace omorilab
