// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_PREPROCESS_HPP
#define OMORILAB_PREPROCESS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "omorilab/data.hpp"

namespace omorilab::preprocess {

/// ln(high/low) of one bar; >= 0. Scale-invariant in the prices.
double daily_range(const DailyBar& bar);

/// Event-centered daily volatility: v(dt) = r(dt) / <r>, mean over the
/// window equal to 1 by construction.
struct DailyVolatilityWindow {
    std::string ticker;
    Date event_date;
    int half_width = 0;
    std::vector<double> v;   // size 2w+1, index w = event day
    double mean_range = 0;   // <r> over the window
};

DailyVolatilityWindow normalize_window(const WindowedSeries& window);

/// 1-minute absolute log returns of one ticker-day, t in [1, 389].
/// mask[t-1] = 1 when both minute t and t-1 were observed.
struct IntradayVolatilitySeries {
    std::string ticker;
    Date date;
    std::vector<double> v;             // size 389, v[t-1] = |ln p(t)/p(t-1)|
    std::vector<std::uint8_t> mask;    // size 389

    IntradayVolatilitySeries() : v(kMinutesPerDay - 1, 0.0), mask(kMinutesPerDay - 1, 0) {}
};

/// Throws when the whole day is absent.
IntradayVolatilitySeries minute_volatility(const MinuteSeries& day);

/// All days of one ticker, carried through the scaling pipeline together.
struct TickerIntraday {
    std::string ticker;
    std::vector<IntradayVolatilitySeries> days; // sorted by date
    double scale = 1.0;                         // std divisor applied by standardize
};

/// Divide every v by the standard deviation pooled over all unmasked minutes
/// of all days. Returns the divisor. Throws on < 2 observations or zero
/// dispersion. Idempotent: a second call divides by 1.
double standardize(TickerIntraday& ticker);

/// Mean volatility at each minute-of-day over the estimation set.
struct IntradayPattern {
    std::vector<double> a;              // size 389
    std::vector<std::uint8_t> valid;    // size 389: >=1 observation and a > 0
    std::size_t days_used = 0;
};

/// day_indices selects the estimation set inside ticker.days (announcement
/// days are normally excluded by the caller). min_days guards against an
/// estimation set too thin to mean anything; pass 1 to disable.
IntradayPattern estimate_pattern(const TickerIntraday& ticker, std::span<const std::size_t> day_indices,
                                 std::size_t min_days = 20);

/// v(t) /= A(t); minutes with an invalid pattern cell become masked.
void remove_pattern(TickerIntraday& ticker, const IntradayPattern& pattern);

enum class VolumeBaseline {
    whole_period, // mean daily volume over the full series
    window,       // mean daily volume over the 2w+1 event window
};

/// phi = event-day volume / baseline mean volume.
double volume_weight(const DailyBarSeries& series, Date event_date, VolumeBaseline baseline,
                     int half_width = 20);

} // namespace omorilab::preprocess

#endif
