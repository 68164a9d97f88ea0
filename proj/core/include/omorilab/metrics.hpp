// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_METRICS_HPP
#define OMORILAB_METRICS_HPP

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omorilab/data.hpp"
#include "omorilab/rng.hpp"

namespace omorilab::metrics {

/// delta(t) = ln(effective / tbill) per trading date.
struct SpreadSeries {
    std::vector<Date> dates;
    std::vector<double> delta;

    std::optional<std::size_t> index_of(Date d) const;
};

SpreadSeries relative_spread(const RateSeries& rates);

/// Exponential look-back weights w(dt) = exp(-dt / lambda), dt in [1, horizon]
/// trading days. Strictly positive and decreasing.
struct WeightProfile {
    double lambda_days = 10.0;
    int horizon = 15;

    double weight(int dt) const { return std::exp(-static_cast<double>(dt) / lambda_days); }
};

/// Weighted mean of delta over [1, L] trading days before the event.
/// A convex combination: min delta <= theta <= max delta.
double speculation_theta(const SpreadSeries& spread, Date event_date, const WeightProfile& profile);

/// (before-mean - after-mean) x S(delta_r); both means weighted as theta,
/// the after window starting one trading day past the event.
double surprise_delta(const SpreadSeries& spread, const AnnouncementEvent& event,
                      const WeightProfile& profile);

/// Volume-weighted cross-stock average of event-day normalized volatility.
struct EventDayVolatility {
    double value = 0;
    std::size_t n_stocks = 0;
};

EventDayVolatility event_day_volatility(std::span<const double> v_event, std::span<const double> phi);

/// Per-event scalar metrics row.
struct EventMetrics {
    Date event_date;
    double theta = 0;
    double delta = 0;
    int sign = +1;
    double v = 0;
    std::size_t n_stocks = 0;
};

struct VolatilityProfile {
    int half_width = 0;
    std::vector<double> mean;  // size 2w+1
    std::vector<double> sigma; // size 2w+1; empty when no dispersion estimate
};

/// Weighted mean profile over all (stock, event) windows; one phi per window,
/// applied at every offset.
VolatilityProfile volatility_profile(std::span<const std::vector<double>> windows,
                                     std::span<const double> phi);

/// Daily material of one stock used for profile dispersion estimates:
/// compact series of present days only.
struct StockDaily {
    std::string ticker;
    std::vector<double> range;  // daily high-low ranges, chronological
    std::vector<double> volume; // matching daily volumes
};

/// Mean profile plus dispersion bars from within-stock circular shuffling of
/// each stock's daily range series (n_shuffles replicates, seeded).
/// event_index[s] lists event positions inside stock s's compact series;
/// windows crossing edges are skipped.
VolatilityProfile profile_with_dispersion(std::span<const StockDaily> stocks,
                                          std::span<const std::vector<std::size_t>> event_index,
                                          int half_width, int n_shuffles, const Rng& master,
                                          int threads = 1);

/// Simple OLS of V on theta plus the ANOVA F-test of slope == 0.
struct Regression {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    double slope_se = 0;
    double f_stat = 0;
    double p_value = 1;
    std::size_t n = 0;
};

Regression theta_volatility_regression(std::span<const double> theta, std::span<const double> v);

} // namespace omorilab::metrics

#endif
