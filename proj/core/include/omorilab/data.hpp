// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_DATA_HPP
#define OMORILAB_DATA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omorilab/dates.hpp"

namespace omorilab {

/// Minutes in one trading session, 9:30-16:00 ET. Minute index 0 is the
/// opening print; intraday returns exist for t in [1, 389].
inline constexpr int kMinutesPerDay = 390;

/// Announcement minute for scheduled FOMC releases (2:15 PM ET).
inline constexpr int kScheduledAnnounceMinute = 285;

/// Ordered set of trading dates with O(log n) date -> index lookup.
/// Immutable after construction.
class TradingCalendar {
public:
    TradingCalendar() = default;

    /// Dates must be strictly increasing; throws otherwise.
    static TradingCalendar from_dates(std::vector<Date> dates);

    const std::vector<Date>& dates() const { return dates_; }
    std::size_t size() const { return dates_.size(); }
    Date at(std::size_t i) const { return dates_.at(i); }
    std::optional<std::size_t> index_of(Date d) const;
    bool contains(Date d) const { return index_of(d).has_value(); }

private:
    std::vector<Date> dates_;
};

struct DailyBar {
    Date date;
    double open = 0, high = 0, low = 0, close = 0;
    double volume = 0;
};

/// Per-ticker daily bars, sorted by date, dates unique.
struct DailyBarSeries {
    std::string ticker;
    std::vector<DailyBar> bars;

    std::optional<std::size_t> index_of(Date d) const;
};

/// One ticker-day of 1-minute prices and volumes on the fixed 390-slot grid.
/// Absent minutes are flagged, never silently zero-priced.
struct MinuteSeries {
    std::string ticker;
    Date date;
    std::vector<double> price;          // size 390
    std::vector<double> volume;         // size 390
    std::vector<std::uint8_t> present;  // size 390, 1 = minute observed

    MinuteSeries() : price(kMinutesPerDay, 0.0), volume(kMinutesPerDay, 0.0), present(kMinutesPerDay, 0) {}

    std::size_t missing_count() const;
};

/// Daily triples (Target, Effective, 6-month T-Bill), percent, aligned on
/// this series' own date grid. fill_count records forward-filled cells.
struct RateSeries {
    std::vector<Date> dates;
    std::vector<double> target;
    std::vector<double> effective;
    std::vector<double> tbill6m;
    std::size_t fill_count = 0;

    std::size_t size() const { return dates.size(); }
    std::optional<std::size_t> index_of(Date d) const;
};

/// One calendar entry from the announcement table.
struct AnnouncementEvent {
    Date date;
    int announce_minute = kScheduledAnnounceMinute; // minutes after the open, [0, 389]
    double r_new = 0;                               // percent
    double delta_r = 0;                             // percent
    bool scheduled = true;
    double relative_change = 0;                     // delta_r / (r_new - delta_r)

    /// +1 when the rate is raised or maintained, -1 when it is cut.
    int sign() const { return delta_r < 0 ? -1 : +1; }
};

/// ticker -> sector label.
using SectorMap = std::map<std::string, std::string>;

/// 2w+1 daily bars centered on an event day (index w).
struct WindowedSeries {
    std::string ticker;
    Date event_date;
    int half_width = 0;
    std::vector<DailyBar> bars;
};

} // namespace omorilab

#endif
