// SPDX-License-Identifier: Apache-2.0

#include "omorilab/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "omorilab/csv.hpp"
#include "omorilab/errors.hpp"

namespace omorilab::ingest {

namespace {

Date parse_date(const CsvReader& r, std::size_t i) {
    try {
        return Date::parse(r.field(i));
    } catch (const Error& e) {
        r.fail(e.what());
    }
}

} // namespace

std::map<std::string, DailyBarSeries> load_daily_bars(const std::string& path) {
    CsvReader r(path, {"ticker", "date", "open", "high", "low", "close", "volume"});
    std::map<std::string, DailyBarSeries> out;
    while (r.next()) {
        const std::string& ticker = r.field(0);
        if (ticker.empty()) r.fail("empty ticker");
        DailyBar bar;
        bar.date = parse_date(r, 1);
        bar.open = r.number(2);
        bar.high = r.number(3);
        bar.low = r.number(4);
        bar.close = r.number(5);
        bar.volume = r.number(6);
        if (bar.open <= 0 || bar.high <= 0 || bar.low <= 0 || bar.close <= 0) {
            r.fail("non-positive price for " + ticker + " on " + bar.date.to_string());
        }
        if (bar.high < bar.low) {
            r.fail("high " + CsvWriter::format(bar.high) + " < low " + CsvWriter::format(bar.low) +
                   " for " + ticker + " on " + bar.date.to_string());
        }
        if (bar.open < bar.low || bar.open > bar.high || bar.close < bar.low || bar.close > bar.high) {
            r.fail("open/close outside [low, high] for " + ticker + " on " + bar.date.to_string());
        }
        if (bar.volume < 0) r.fail("negative volume for " + ticker);
        auto& series = out[ticker];
        series.ticker = ticker;
        series.bars.push_back(bar);
    }
    for (auto& [ticker, series] : out) {
        std::sort(series.bars.begin(), series.bars.end(),
                  [](const DailyBar& a, const DailyBar& b) { return a.date < b.date; });
        for (std::size_t i = 1; i < series.bars.size(); ++i) {
            if (series.bars[i].date == series.bars[i - 1].date) {
                throw ValidationError(path, 0,
                                      "duplicate date " + series.bars[i].date.to_string() + " for " + ticker);
            }
        }
    }
    return out;
}

TradingCalendar calendar_from_bars(const std::map<std::string, DailyBarSeries>& bars) {
    std::set<Date> dates;
    for (const auto& [ticker, series] : bars) {
        for (const auto& b : series.bars) dates.insert(b.date);
    }
    return TradingCalendar::from_dates(std::vector<Date>(dates.begin(), dates.end()));
}

std::map<std::string, std::map<Date, MinuteSeries>> load_minute_bars(const std::string& path) {
    CsvReader r(path, {"ticker", "date", "minute", "price", "volume"});
    std::map<std::string, std::map<Date, MinuteSeries>> out;
    while (r.next()) {
        const std::string& ticker = r.field(0);
        if (ticker.empty()) r.fail("empty ticker");
        const Date date = parse_date(r, 1);
        const long minute = r.integer(2);
        if (minute < 0 || minute >= kMinutesPerDay) {
            r.fail("minute " + std::to_string(minute) + " outside [0, 389]");
        }
        const double price = r.number(3);
        const double volume = r.number(4);
        if (price <= 0) r.fail("non-positive price for " + ticker + " on " + date.to_string());
        if (volume < 0) r.fail("negative volume for " + ticker);
        MinuteSeries& day = out[ticker][date];
        if (day.present[static_cast<std::size_t>(minute)]) {
            r.fail("duplicate minute " + std::to_string(minute) + " for " + ticker + " on " +
                   date.to_string());
        }
        day.ticker = ticker;
        day.date = date;
        day.price[static_cast<std::size_t>(minute)] = price;
        day.volume[static_cast<std::size_t>(minute)] = volume;
        day.present[static_cast<std::size_t>(minute)] = 1;
    }
    return out;
}

RateSeries load_rates(const std::string& path) {
    CsvReader r(path, {"date", "target", "effective", "tbill6m"});
    RateSeries out;
    const char* names[3] = {"target", "effective", "tbill6m"};
    while (r.next()) {
        const Date date = parse_date(r, 0);
        if (!out.dates.empty() && !(out.dates.back() < date)) {
            r.fail("dates must be strictly increasing at " + date.to_string());
        }
        double vals[3];
        std::vector<double>* cols[3] = {&out.target, &out.effective, &out.tbill6m};
        for (std::size_t c = 0; c < 3; ++c) {
            if (r.empty_field(c + 1)) {
                if (cols[c]->empty()) {
                    r.fail(std::string("leading gap: no prior ") + names[c] + " value to fill from");
                }
                vals[c] = cols[c]->back();
                ++out.fill_count;
            } else {
                vals[c] = r.number(c + 1);
                if (vals[c] <= 0) r.fail(std::string("non-positive ") + names[c] + " rate");
            }
        }
        out.dates.push_back(date);
        for (std::size_t c = 0; c < 3; ++c) cols[c]->push_back(vals[c]);
    }
    return out;
}

RateSeries align_rates(const RateSeries& rates, const TradingCalendar& calendar) {
    RateSeries out;
    out.fill_count = 0;
    std::size_t src = 0;
    for (Date d : calendar.dates()) {
        while (src < rates.size() && rates.dates[src] < d) ++src;
        if (src < rates.size() && rates.dates[src] == d) {
            out.dates.push_back(d);
            out.target.push_back(rates.target[src]);
            out.effective.push_back(rates.effective[src]);
            out.tbill6m.push_back(rates.tbill6m[src]);
        } else {
            if (src == 0) {
                throw ValidationError("leading gap: calendar starts " + d.to_string() +
                                      ", before the first rates row");
            }
            out.dates.push_back(d);
            out.target.push_back(rates.target[src - 1]);
            out.effective.push_back(rates.effective[src - 1]);
            out.tbill6m.push_back(rates.tbill6m[src - 1]);
            ++out.fill_count;
        }
    }
    return out;
}

std::vector<AnnouncementEvent> load_events(const std::string& path) {
    CsvReader r(path, {"date", "announce_minute", "r_new", "delta_r", "scheduled"});
    std::vector<AnnouncementEvent> out;
    while (r.next()) {
        AnnouncementEvent e;
        e.date = parse_date(r, 0);
        e.scheduled = r.flag(4);
        if (r.empty_field(1)) {
            if (!e.scheduled) r.fail("unscheduled event must carry an announce_minute");
            e.announce_minute = kScheduledAnnounceMinute;
        } else {
            const long t = r.integer(1);
            if (t < 0 || t >= kMinutesPerDay) {
                r.fail("announce_minute " + std::to_string(t) + " outside [0, 389]");
            }
            e.announce_minute = static_cast<int>(t);
        }
        e.r_new = r.number(2);
        e.delta_r = r.number(3);
        const double r_old = e.r_new - e.delta_r;
        if (r_old == 0.0 || !std::isfinite(e.delta_r / r_old)) {
            r.fail("relative change delta_r / (r_new - delta_r) is not finite");
        }
        e.relative_change = e.delta_r / r_old;
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(),
              [](const AnnouncementEvent& a, const AnnouncementEvent& b) { return a.date < b.date; });
    return out;
}

SectorMap load_sectors(const std::string& path) {
    CsvReader r(path, {"ticker", "sector"});
    SectorMap out;
    while (r.next()) {
        if (r.field(0).empty() || r.field(1).empty()) r.fail("empty ticker or sector");
        if (!out.emplace(r.field(0), r.field(1)).second) r.fail("duplicate ticker " + r.field(0));
    }
    return out;
}

WindowedSeries event_window(const DailyBarSeries& series, Date event_date, int half_width) {
    if (half_width < 0) throw Error("half_width must be >= 0");
    const auto idx = series.index_of(event_date);
    if (!idx) {
        throw Error(event_date.to_string() + " is not a trading day for " + series.ticker);
    }
    const std::size_t w = static_cast<std::size_t>(half_width);
    if (*idx < w || *idx + w >= series.bars.size()) {
        throw Error("window [-" + std::to_string(half_width) + ", +" + std::to_string(half_width) +
                    "] around " + event_date.to_string() + " for " + series.ticker +
                    " crosses the data edge");
    }
    WindowedSeries out;
    out.ticker = series.ticker;
    out.event_date = event_date;
    out.half_width = half_width;
    out.bars.assign(series.bars.begin() + static_cast<std::ptrdiff_t>(*idx - w),
                    series.bars.begin() + static_cast<std::ptrdiff_t>(*idx + w + 1));
    return out;
}

} // namespace omorilab::ingest
