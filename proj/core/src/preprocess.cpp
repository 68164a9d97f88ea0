// SPDX-License-Identifier: Apache-2.0

#include "omorilab/preprocess.hpp"

#include <cmath>

#include "omorilab/errors.hpp"
#include "omorilab/ingest.hpp"
#include "omorilab/numeric.hpp"

namespace omorilab::preprocess {

double daily_range(const DailyBar& bar) {
    if (bar.low <= 0 || bar.high <= 0) throw Error("non-positive price in bar " + bar.date.to_string());
    if (bar.high < bar.low) throw Error("high < low in bar " + bar.date.to_string());
    return std::log(bar.high / bar.low);
}

DailyVolatilityWindow normalize_window(const WindowedSeries& window) {
    DailyVolatilityWindow out;
    out.ticker = window.ticker;
    out.event_date = window.event_date;
    out.half_width = window.half_width;
    out.v.reserve(window.bars.size());
    KahanSum sum;
    for (const auto& bar : window.bars) {
        const double r = daily_range(bar);
        out.v.push_back(r);
        sum.add(r);
    }
    out.mean_range = sum.value() / static_cast<double>(out.v.size());
    if (out.mean_range <= 0) {
        throw Error("all-flat window around " + window.event_date.to_string() + " for " + window.ticker +
                    ": <r> = 0");
    }
    for (double& v : out.v) v /= out.mean_range;
    return out;
}

IntradayVolatilitySeries minute_volatility(const MinuteSeries& day) {
    if (day.missing_count() == static_cast<std::size_t>(kMinutesPerDay)) {
        throw Error("entire day missing for " + day.ticker + " on " + day.date.to_string());
    }
    IntradayVolatilitySeries out;
    out.ticker = day.ticker;
    out.date = day.date;
    for (int t = 1; t < kMinutesPerDay; ++t) {
        const auto i = static_cast<std::size_t>(t);
        if (day.present[i] && day.present[i - 1]) {
            out.v[i - 1] = std::abs(std::log(day.price[i] / day.price[i - 1]));
            out.mask[i - 1] = 1;
        }
    }
    return out;
}

double standardize(TickerIntraday& ticker) {
    std::vector<double> pooled;
    for (const auto& day : ticker.days) {
        for (std::size_t i = 0; i < day.v.size(); ++i) {
            if (day.mask[i]) pooled.push_back(day.v[i]);
        }
    }
    if (pooled.size() < 2) {
        throw Error("standardize needs >= 2 unmasked observations for " + ticker.ticker);
    }
    const double sd = stddev(pooled, 0);
    if (sd <= 0) throw Error("zero dispersion for " + ticker.ticker);
    for (auto& day : ticker.days) {
        for (double& v : day.v) v /= sd;
    }
    ticker.scale *= sd;
    return sd;
}

IntradayPattern estimate_pattern(const TickerIntraday& ticker, std::span<const std::size_t> day_indices,
                                 std::size_t min_days) {
    if (day_indices.empty()) throw Error("pattern estimation set is empty for " + ticker.ticker);
    if (day_indices.size() < min_days) {
        throw Error("pattern estimation set for " + ticker.ticker + " spans " +
                    std::to_string(day_indices.size()) + " days, need >= " + std::to_string(min_days));
    }
    IntradayPattern out;
    out.a.assign(kMinutesPerDay - 1, 0.0);
    out.valid.assign(kMinutesPerDay - 1, 0);
    out.days_used = day_indices.size();
    std::vector<KahanSum> sums(kMinutesPerDay - 1);
    std::vector<std::size_t> counts(kMinutesPerDay - 1, 0);
    for (std::size_t d : day_indices) {
        const auto& day = ticker.days.at(d);
        for (std::size_t i = 0; i < day.v.size(); ++i) {
            if (day.mask[i]) {
                sums[i].add(day.v[i]);
                ++counts[i];
            }
        }
    }
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (counts[i] > 0) {
            out.a[i] = sums[i].value() / static_cast<double>(counts[i]);
            out.valid[i] = out.a[i] > 0 ? 1 : 0;
        }
    }
    return out;
}

void remove_pattern(TickerIntraday& ticker, const IntradayPattern& pattern) {
    for (auto& day : ticker.days) {
        for (std::size_t i = 0; i < day.v.size(); ++i) {
            if (!day.mask[i]) continue;
            if (pattern.valid[i]) {
                day.v[i] /= pattern.a[i];
            } else {
                day.mask[i] = 0;
            }
        }
    }
}

double volume_weight(const DailyBarSeries& series, Date event_date, VolumeBaseline baseline,
                     int half_width) {
    const auto idx = series.index_of(event_date);
    if (!idx) throw Error(event_date.to_string() + " is not a trading day for " + series.ticker);
    const double event_volume = series.bars[*idx].volume;
    KahanSum sum;
    std::size_t n = 0;
    if (baseline == VolumeBaseline::whole_period) {
        for (const auto& b : series.bars) {
            sum.add(b.volume);
            ++n;
        }
    } else {
        const WindowedSeries w = ingest::event_window(series, event_date, half_width);
        for (const auto& b : w.bars) {
            sum.add(b.volume);
            ++n;
        }
    }
    const double base = sum.value() / static_cast<double>(n);
    if (base <= 0) throw Error("zero baseline volume for " + series.ticker);
    const double phi = event_volume / base;
    if (!std::isfinite(phi) || phi < 0) throw Error("invalid volume weight for " + series.ticker);
    return phi;
}

} // namespace omorilab::preprocess
