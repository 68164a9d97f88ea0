// SPDX-License-Identifier: Apache-2.0

#include "omorilab/metrics.hpp"

#include <algorithm>

#include "omorilab/errors.hpp"
#include "omorilab/numeric.hpp"
#include "omorilab/parallel.hpp"
#include "omorilab/stats.hpp"

namespace omorilab::metrics {

std::optional<std::size_t> SpreadSeries::index_of(Date d) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates.begin());
}

SpreadSeries relative_spread(const RateSeries& rates) {
    SpreadSeries out;
    out.dates = rates.dates;
    out.delta.reserve(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (rates.effective[i] <= 0 || rates.tbill6m[i] <= 0) {
            throw Error("non-positive rate on " + rates.dates[i].to_string());
        }
        out.delta.push_back(std::log(rates.effective[i] / rates.tbill6m[i]));
    }
    return out;
}

namespace {

// Weighted mean of delta at offsets event_idx + dir * dt, dt in [1, horizon].
double weighted_window_mean(const SpreadSeries& spread, std::size_t event_idx, int dir,
                            const WeightProfile& profile) {
    KahanSum num, den;
    for (int dt = 1; dt <= profile.horizon; ++dt) {
        const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(event_idx) + dir * dt;
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(spread.delta.size())) {
            throw Error("insufficient spread history: need " + std::to_string(profile.horizon) +
                        " trading days " + (dir < 0 ? "before " : "after ") +
                        spread.dates[event_idx].to_string());
        }
        const double w = profile.weight(dt);
        num.add(spread.delta[static_cast<std::size_t>(i)] * w);
        den.add(w);
    }
    return num.value() / den.value();
}

} // namespace

double speculation_theta(const SpreadSeries& spread, Date event_date, const WeightProfile& profile) {
    const auto idx = spread.index_of(event_date);
    if (!idx) throw Error(event_date.to_string() + " is not on the spread calendar");
    return weighted_window_mean(spread, *idx, -1, profile);
}

double surprise_delta(const SpreadSeries& spread, const AnnouncementEvent& event,
                      const WeightProfile& profile) {
    const auto idx = spread.index_of(event.date);
    if (!idx) throw Error(event.date.to_string() + " is not on the spread calendar");
    const double before = weighted_window_mean(spread, *idx, -1, profile);
    const double after = weighted_window_mean(spread, *idx, +1, profile);
    return (before - after) * event.sign();
}

EventDayVolatility event_day_volatility(std::span<const double> v_event, std::span<const double> phi) {
    if (v_event.size() != phi.size()) throw Error("event_day_volatility: size mismatch");
    if (v_event.empty()) throw Error("event_day_volatility: no stocks");
    KahanSum num, den;
    for (std::size_t j = 0; j < v_event.size(); ++j) {
        num.add(v_event[j] * phi[j]);
        den.add(phi[j]);
    }
    if (den.value() <= 0) throw Error("event_day_volatility: sum of weights is zero");
    return {num.value() / den.value(), v_event.size()};
}

VolatilityProfile volatility_profile(std::span<const std::vector<double>> windows,
                                     std::span<const double> phi) {
    if (windows.empty()) throw Error("volatility_profile: no (stock, event) pairs");
    if (windows.size() != phi.size()) throw Error("volatility_profile: size mismatch");
    const std::size_t len = windows[0].size();
    for (const auto& w : windows) {
        if (w.size() != len) throw Error("volatility_profile: windows must share half-width");
    }
    KahanSum den;
    for (double p : phi) den.add(p);
    if (den.value() <= 0) throw Error("volatility_profile: sum of weights is zero");
    VolatilityProfile out;
    out.half_width = static_cast<int>((len - 1) / 2);
    out.mean.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        KahanSum num;
        for (std::size_t j = 0; j < windows.size(); ++j) num.add(windows[j][k] * phi[j]);
        out.mean[k] = num.value() / den.value();
    }
    return out;
}

namespace {

// Extract normalized windows + weights from compact per-stock series.
// Returns false when the window crosses an edge or is all-flat.
bool window_at(const StockDaily& stock, std::size_t center, int w, std::vector<double>& out_v,
               double& out_phi) {
    const std::size_t len = 2 * static_cast<std::size_t>(w) + 1;
    if (center < static_cast<std::size_t>(w) || center + static_cast<std::size_t>(w) >= stock.range.size()) {
        return false;
    }
    KahanSum rsum, vsum;
    for (std::size_t k = 0; k < len; ++k) {
        const std::size_t i = center - static_cast<std::size_t>(w) + k;
        rsum.add(stock.range[i]);
        vsum.add(stock.volume[i]);
    }
    const double rmean = rsum.value() / static_cast<double>(len);
    const double vmean = vsum.value() / static_cast<double>(len);
    if (rmean <= 0 || vmean <= 0) return false;
    out_v.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        out_v[k] = stock.range[center - static_cast<std::size_t>(w) + k] / rmean;
    }
    out_phi = stock.volume[center] / vmean;
    return true;
}

} // namespace

VolatilityProfile profile_with_dispersion(std::span<const StockDaily> stocks,
                                          std::span<const std::vector<std::size_t>> event_index,
                                          int half_width, int n_shuffles, const Rng& master,
                                          int threads) {
    if (stocks.size() != event_index.size()) throw Error("profile_with_dispersion: size mismatch");
    const auto collect = [&](const std::vector<std::vector<double>>& ranges) {
        std::vector<std::vector<double>> windows;
        std::vector<double> phis;
        std::vector<double> buf;
        double phi = 0;
        for (std::size_t s = 0; s < stocks.size(); ++s) {
            StockDaily view = stocks[s];
            if (!ranges.empty()) view.range = ranges[s];
            for (std::size_t center : event_index[s]) {
                if (window_at(view, center, half_width, buf, phi)) {
                    windows.push_back(buf);
                    phis.push_back(phi);
                }
            }
        }
        if (windows.empty()) throw Error("profile_with_dispersion: no valid (stock, event) windows");
        return volatility_profile(windows, phis);
    };

    VolatilityProfile base = collect({});
    if (n_shuffles <= 0) return base;

    const std::size_t len = base.mean.size();
    std::vector<std::vector<double>> replicate_means(static_cast<std::size_t>(n_shuffles));
    parallel_for(static_cast<std::size_t>(n_shuffles), threads, [&](std::size_t rep) {
        std::vector<std::vector<double>> shuffled(stocks.size());
        for (std::size_t s = 0; s < stocks.size(); ++s) {
            Rng r = master.derive(rep * 0x10001ull + s);
            const auto& src = stocks[s].range;
            const std::size_t n = src.size();
            shuffled[s].resize(n);
            const std::size_t shift = n > 0 ? static_cast<std::size_t>(r.uniform_int(n)) : 0;
            for (std::size_t i = 0; i < n; ++i) shuffled[s][i] = src[(i + shift) % n];
        }
        replicate_means[rep] = collect(shuffled).mean;
    });

    base.sigma.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        std::vector<double> vals;
        vals.reserve(replicate_means.size());
        for (const auto& m : replicate_means) vals.push_back(m[k]);
        base.sigma[k] = stddev(vals, 1);
    }
    return base;
}

Regression theta_volatility_regression(std::span<const double> theta, std::span<const double> v) {
    const std::size_t n = theta.size();
    if (n != v.size()) throw Error("theta_volatility_regression: size mismatch");
    if (n < 3) throw Error("theta_volatility_regression: need >= 3 pairs");
    const double xb = mean(theta);
    const double yb = mean(v);
    KahanSum sxx, sxy, syy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((theta[i] - xb) * (theta[i] - xb));
        sxy.add((theta[i] - xb) * (v[i] - yb));
        syy.add((v[i] - yb) * (v[i] - yb));
    }
    if (sxx.value() <= 0) throw Error("theta_volatility_regression: degenerate theta variance");
    Regression out;
    out.n = n;
    out.slope = sxy.value() / sxx.value();
    out.intercept = yb - out.slope * xb;
    KahanSum ss_res;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = v[i] - (out.intercept + out.slope * theta[i]);
        ss_res.add(r * r);
    }
    out.r2 = syy.value() > 0 ? 1.0 - ss_res.value() / syy.value() : 1.0;
    const double mse = ss_res.value() / static_cast<double>(n - 2);
    out.slope_se = std::sqrt(std::max(0.0, mse) / sxx.value());
    const auto f = stats::anova_f_test(theta, v);
    out.f_stat = f.statistic;
    out.p_value = f.p_value;
    return out;
}

} // namespace omorilab::metrics
