// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_INGEST_HPP
#define OMORILAB_INGEST_HPP

#include <map>
#include <string>
#include <vector>

#include "omorilab/data.hpp"

namespace omorilab::ingest {

/// Daily bars grouped per ticker, sorted by date.
/// CSV schema: ticker,date,open,high,low,close,volume
std::map<std::string, DailyBarSeries> load_daily_bars(const std::string& path);

/// Trading calendar inferred as the union of dates across all tickers.
TradingCalendar calendar_from_bars(const std::map<std::string, DailyBarSeries>& bars);

/// Dense 390-slot minute series per (ticker, date); absent minutes flagged.
/// CSV schema: ticker,date,minute,price,volume with minute in [0, 389]
std::map<std::string, std::map<Date, MinuteSeries>> load_minute_bars(const std::string& path);

/// Rates on the file's own date grid. A row may leave a field empty; the gap
/// is forward-filled from the most recent prior value and counted in
/// fill_count. A leading gap (nothing to fill from) is an error.
/// CSV schema: date,target,effective,tbill6m (percent)
RateSeries load_rates(const std::string& path);

/// Reindex rates onto a trading calendar, forward-filling dates the file
/// does not cover. Errors when the calendar starts before the rates do.
RateSeries align_rates(const RateSeries& rates, const TradingCalendar& calendar);

/// Chronologically sorted announcement events, relative change precomputed.
/// CSV schema: date,announce_minute,r_new,delta_r,scheduled. The
/// announce_minute field may be left empty for scheduled events (defaults
/// to 285 = 2:15 PM ET).
std::vector<AnnouncementEvent> load_events(const std::string& path);

/// CSV schema: ticker,sector
SectorMap load_sectors(const std::string& path);

/// Extract the [-half_width, +half_width] trading-day window around
/// event_date. Throws when the date is not in the series or the window
/// would cross a data edge (truncated windows are rejected, not padded).
WindowedSeries event_window(const DailyBarSeries& series, Date event_date, int half_width);

} // namespace omorilab::ingest

#endif
