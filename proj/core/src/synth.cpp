// SPDX-License-Identifier: Apache-2.0

#include "omorilab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "omorilab/csv.hpp"
#include "omorilab/errors.hpp"

namespace omorilab::synth {

namespace {

// Half-normal scale giving unit standard deviation.
const double kHalfNormalSigma = 1.0 / std::sqrt(1.0 - 2.0 / std::numbers::pi);

double half_normal_unit_std(Rng& rng) {
    return std::abs(rng.normal(0.0, kHalfNormalSigma));
}

double noise_mark(Rng& rng, double cap) {
    for (;;) {
        const double m = half_normal_unit_std(rng);
        if (m < cap) return m;
    }
}

void validate_spec(const OmoriProcessSpec& spec) {
    if (spec.omega >= 1.0) {
        throw Error("simulate_omori: omega must be < 1 (cumulative form beta tau^(1-omega) is invalid)");
    }
    if (spec.beta <= 0) throw Error("simulate_omori: beta must be positive");
    if (spec.horizon < 1) throw Error("simulate_omori: horizon must be >= 1");
}

} // namespace

double expected_count(const OmoriProcessSpec& spec) {
    return spec.beta * std::pow(static_cast<double>(spec.horizon), 1.0 - spec.omega);
}

double beta_for_expected_count(double expected, double omega, int horizon) {
    return expected / std::pow(static_cast<double>(horizon), 1.0 - omega);
}

SimulatedStream simulate_omori(const OmoriProcessSpec& spec) {
    validate_spec(spec);
    Rng rng(spec.seed);
    SimulatedStream out;

    const long n_first = rng.poisson(spec.beta); // Lambda(1) = beta
    out.direct = static_cast<std::size_t>(n_first);
    out.taus.assign(static_cast<std::size_t>(n_first), 1);

    const double h = static_cast<double>(spec.horizon);
    if (spec.horizon > 1) {
        const double coeff = spec.beta * (1.0 - spec.omega);
        const double dominating = coeff * std::max(1.0, std::pow(h, -spec.omega));
        const long n_prop = rng.poisson(dominating * (h - 1.0));
        out.proposed = static_cast<std::size_t>(n_prop);
        for (long i = 0; i < n_prop; ++i) {
            const double t = rng.uniform(1.0, h);
            const double intensity = coeff * std::pow(t, -spec.omega);
            if (rng.uniform01() < intensity / dominating) {
                out.taus.push_back(static_cast<int>(std::ceil(t)));
                ++out.accepted;
            }
        }
        out.acceptance_rate =
            out.proposed > 0 ? static_cast<double>(out.accepted) / static_cast<double>(out.proposed) : 1.0;
    }
    std::sort(out.taus.begin(), out.taus.end());
    return out;
}

std::vector<MarkedEvent> simulate_marked_omori(std::span<const MarkedBand> bands, int horizon) {
    if (bands.empty()) throw Error("simulate_marked_omori: no bands");
    for (std::size_t i = 1; i < bands.size(); ++i) {
        if (!(bands[i - 1].q < bands[i].q)) {
            throw Error("simulate_marked_omori: band thresholds must be strictly ascending");
        }
    }
    std::vector<MarkedEvent> out;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const MarkedBand& band = bands[i];
        const double q_hi = i + 1 < bands.size() ? bands[i + 1].q : band.q + 2.0;
        OmoriProcessSpec spec;
        spec.omega = band.omega;
        spec.horizon = horizon;
        spec.beta = beta_for_expected_count(band.expected_count, band.omega, horizon);
        spec.seed = band.seed;
        const SimulatedStream stream = simulate_omori(spec);
        Rng marks(Rng(band.seed).derive_seed(0x6d61726bull));
        for (int tau : stream.taus) {
            const double u = std::max(marks.uniform01(), 1e-9);
            out.push_back({tau, band.q + u * (q_hi - band.q)});
        }
    }
    std::sort(out.begin(), out.end(), [](const MarkedEvent& a, const MarkedEvent& b) {
        return a.tau != b.tau ? a.tau < b.tau : a.mark < b.mark;
    });
    return out;
}

preprocess::IntradayVolatilitySeries marked_day(std::span<const MarkedEvent> stream, int announce_minute,
                                                double noise_below, std::uint64_t noise_seed,
                                                const std::string& ticker, Date date) {
    if (announce_minute < 0 || announce_minute >= kMinutesPerDay) {
        throw Error("marked_day: announcement minute outside the day");
    }
    preprocess::IntradayVolatilitySeries out;
    out.ticker = ticker;
    out.date = date;
    Rng rng(noise_seed);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        out.v[i] = noise_mark(rng, noise_below);
        out.mask[i] = 1;
    }
    for (const MarkedEvent& e : stream) {
        const int minute = announce_minute + e.tau;
        if (minute < 1 || minute >= kMinutesPerDay) continue; // beyond the day
        auto& cell = out.v[static_cast<std::size_t>(minute - 1)];
        cell = std::max(cell, e.mark);
    }
    return out;
}

namespace {

// Per-minute exceedance probabilities p(k) = Lambda(k) - Lambda(k-1).
std::vector<double> bernoulli_profile(const DayProcessSpec& spec, int horizon) {
    if (spec.omega >= 1.0) throw Error("market day: omega must be < 1");
    if (spec.expected_events < 0) throw Error("market day: negative expected events");
    const double beta = beta_for_expected_count(spec.expected_events, spec.omega, horizon);
    if (beta > 1.0) {
        throw Error("market day: expected events too high for the minute grid (first-minute "
                    "probability " +
                    CsvWriter::format(beta) + " > 1)");
    }
    std::vector<double> p(static_cast<std::size_t>(horizon), 0.0);
    for (int k = 1; k <= horizon; ++k) {
        const double hi = beta * std::pow(static_cast<double>(k), 1.0 - spec.omega);
        const double lo = beta * std::pow(static_cast<double>(k - 1), 1.0 - spec.omega);
        p[static_cast<std::size_t>(k - 1)] = std::min(1.0, hi - lo);
    }
    return p;
}

} // namespace

SyntheticDay simulate_market_day(const MarketDaySpec& spec) {
    const int T = spec.announce_minute;
    if (T < 1 || T > kMinutesPerDay - 2) {
        throw Error("simulate_market_day: announcement minute must lie in [1, 388]");
    }
    if (spec.baseline_rate < 0 || spec.baseline_rate >= 1) {
        throw Error("simulate_market_day: baseline rate must lie in [0, 1)");
    }
    if (spec.threshold_q <= 0.5) throw Error("simulate_market_day: threshold too low for the noise model");

    Rng rng(spec.seed);
    Rng before_rng = rng.derive(1);
    Rng after_rng = rng.derive(2);
    Rng baseline_rng = rng.derive(3);
    Rng mark_rng = rng.derive(4);
    Rng noise_rng = rng.derive(5);

    std::vector<std::uint8_t> hit(kMinutesPerDay, 0); // index = minute
    if (spec.before) {
        const auto p = bernoulli_profile(*spec.before, T - 1);
        for (int tau = 1; tau <= T - 1; ++tau) {
            if (before_rng.bernoulli(p[static_cast<std::size_t>(tau - 1)])) {
                hit[static_cast<std::size_t>(T - tau)] = 1;
            }
        }
    }
    if (spec.after) {
        const int horizon = kMinutesPerDay - 1 - T;
        const auto p = bernoulli_profile(*spec.after, horizon);
        for (int tau = 1; tau <= horizon; ++tau) {
            if (after_rng.bernoulli(p[static_cast<std::size_t>(tau - 1)])) {
                hit[static_cast<std::size_t>(T + tau)] = 1;
            }
        }
    }
    if (spec.baseline_rate > 0) {
        for (int m = 1; m < kMinutesPerDay; ++m) {
            if (baseline_rng.bernoulli(spec.baseline_rate)) hit[static_cast<std::size_t>(m)] = 1;
        }
    }

    SyntheticDay out;
    out.spec = spec;
    out.series.ticker = spec.ticker;
    out.series.date = spec.date;
    out.planted.ticker = spec.ticker;
    out.planted.date = spec.date;
    out.planted.q = spec.threshold_q;
    for (int m = 1; m < kMinutesPerDay; ++m) {
        const auto i = static_cast<std::size_t>(m - 1);
        out.series.mask[i] = 1;
        if (hit[static_cast<std::size_t>(m)]) {
            out.series.v[i] = spec.threshold_q + 0.1 + 0.5 * std::abs(mark_rng.normal());
            out.planted.minutes.push_back(m);
        } else {
            out.series.v[i] = noise_mark(noise_rng, spec.threshold_q - 0.05);
        }
    }
    return out;
}

RateScenario simulate_rate_scenario(double theta_target, double delta_target,
                                    const AnnouncementEvent& event,
                                    const metrics::WeightProfile& before_profile,
                                    const metrics::WeightProfile& after_profile) {
    if (!std::isfinite(theta_target) || !std::isfinite(delta_target)) {
        throw Error("simulate_rate_scenario: targets must be finite");
    }
    const int n_before = std::max(before_profile.horizon, after_profile.horizon);
    const int n_after = after_profile.horizon;
    // Constant delta = theta before (both windows see theta exactly);
    // constant after level chosen so (before - after) * S = delta_target.
    const double after_level = theta_target - delta_target * event.sign();

    std::vector<Date> before_dates;
    {
        Date d = event.date;
        for (int i = 0; i < n_before; ++i) {
            d = d.prev_business_day();
            before_dates.push_back(d);
        }
        std::reverse(before_dates.begin(), before_dates.end());
    }

    RateScenario out;
    out.event = event;
    auto push = [&](Date d, double delta) {
        out.rates.dates.push_back(d);
        out.rates.target.push_back(event.r_new);
        out.rates.tbill6m.push_back(3.0);
        out.rates.effective.push_back(3.0 * std::exp(delta));
    };
    for (Date d : before_dates) push(d, theta_target);
    push(event.date, theta_target);
    Date d = event.date;
    for (int i = 0; i < n_after; ++i) {
        d = d.next_business_day();
        push(d, after_level);
    }
    return out;
}

// --- file emission ---------------------------------------------------------

namespace {

std::string ticker_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%03d", i);
    return buf;
}

void write_minute_day(CsvWriter& w, const std::string& ticker, Date date,
                      std::span<const double> marks, Rng& rng) {
    // price path whose absolute log returns are marks * 1e-3; per-minute
    // factors cancel through standardize + detrend, so the scale is free
    double price = 100.0 * (1.0 + 0.1 * rng.uniform01());
    w.cell(ticker).cell(date.to_string()).cell(0L).cell(price).cell(10000.0 + 100.0 * rng.uniform01());
    w.end_row();
    for (int t = 1; t < kMinutesPerDay; ++t) {
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        price *= std::exp(sign * marks[static_cast<std::size_t>(t - 1)] * 1e-3);
        w.cell(ticker).cell(date.to_string()).cell(static_cast<long>(t)).cell(price).cell(
            10000.0 + 100.0 * rng.uniform01());
        w.end_row();
    }
}

} // namespace

void emit_market_files(const MarketSimSpec& spec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (spec.n_stocks < 1) throw Error("market sim: need at least one stock");
    if (spec.events.empty()) throw Error("market sim: need at least one event");
    fs::create_directories(out_dir);

    const int n_bg = spec.background_days + (spec.background_days % 2); // even
    if (n_bg < 2) throw Error("market sim: need at least 2 background days");

    // lay out dates: background days first, then event spans in order
    std::vector<Date> bg_dates;
    Date d = spec.start_date;
    if (d.is_weekend()) d = d.next_business_day();
    for (int i = 0; i < n_bg; ++i) {
        bg_dates.push_back(d);
        d = d.next_business_day();
    }
    Date next_free = bg_dates.back().next_business_day();
    for (const auto& ev : spec.events) {
        if (ev.date < next_free || ev.date.is_weekend()) {
            throw Error("market sim: event " + ev.date.to_string() +
                        " overlaps the background days or a previous event span");
        }
        Date end = ev.date;
        for (int k = 1; k < std::max(1, ev.days); ++k) end = end.next_business_day();
        next_free = end.next_business_day();
    }

    Rng master(spec.seed);
    CsvWriter minutes(out_dir + "/minute_bars.csv", {"ticker", "date", "minute", "price", "volume"}, 17);

    nlohmann::ordered_json truth;
    truth["seed"] = spec.seed;
    truth["n_stocks"] = spec.n_stocks;
    truth["threshold_q"] = spec.threshold_q;
    truth["background_days"] = n_bg;
    truth["events"] = nlohmann::ordered_json::array();

    for (int s = 0; s < spec.n_stocks; ++s) {
        const std::string ticker = ticker_name(s);
        Rng stock_rng = master.derive(0x5710c000ull + static_cast<std::uint64_t>(s));

        // background days: per-minute cross-day mean exactly 1 (paired
        // 1 +/- e), so pattern removal is neutral for the planted days
        std::vector<std::vector<double>> bg(static_cast<std::size_t>(n_bg));
        for (auto& day : bg) day.assign(kMinutesPerDay - 1, 1.0);
        Rng pair_rng = stock_rng.derive(1);
        for (int t = 0; t < kMinutesPerDay - 1; ++t) {
            for (int p = 0; p < n_bg / 2; ++p) {
                const double e = pair_rng.uniform(0.05, 0.45);
                bg[static_cast<std::size_t>(2 * p)][static_cast<std::size_t>(t)] = 1.0 + e;
                bg[static_cast<std::size_t>(2 * p + 1)][static_cast<std::size_t>(t)] = 1.0 - e;
            }
        }
        Rng path_rng = stock_rng.derive(2);
        for (int i = 0; i < n_bg; ++i) {
            write_minute_day(minutes, ticker, bg_dates[static_cast<std::size_t>(i)],
                             bg[static_cast<std::size_t>(i)], path_rng);
        }

        // event spans
        for (std::size_t e = 0; e < spec.events.size(); ++e) {
            const auto& ev = spec.events[e];
            const int span = std::max(1, ev.days);
            const int grid = span * kMinutesPerDay;
            const int T = ev.announce_minute;
            if (T < 1 || T >= kMinutesPerDay - 1) {
                throw Error("market sim: announce_minute must lie in [1, 388]");
            }
            Rng ev_rng = stock_rng.derive(0xe000ull + e);
            std::vector<std::uint8_t> hit(static_cast<std::size_t>(grid), 0);
            if (ev.before) {
                const auto p = bernoulli_profile(*ev.before, T - 1);
                Rng r = ev_rng.derive(1);
                for (int tau = 1; tau <= T - 1; ++tau) {
                    if (r.bernoulli(p[static_cast<std::size_t>(tau - 1)])) {
                        hit[static_cast<std::size_t>(T - tau)] = 1;
                    }
                }
            }
            if (ev.after) {
                const int horizon = grid - 1 - T;
                const auto p = bernoulli_profile(*ev.after, horizon);
                Rng r = ev_rng.derive(2);
                for (int tau = 1; tau <= horizon; ++tau) {
                    int m = T + tau;
                    if (m % kMinutesPerDay == 0) ++m; // continuation days have no minute-0 return
                    if (m >= grid) continue;
                    if (r.bernoulli(p[static_cast<std::size_t>(tau - 1)])) {
                        hit[static_cast<std::size_t>(m)] = 1;
                    }
                }
            }
            if (ev.baseline_rate > 0) {
                Rng r = ev_rng.derive(3);
                for (int m = 1; m < grid; ++m) {
                    if (m % kMinutesPerDay == 0) continue;
                    if (r.bernoulli(ev.baseline_rate)) hit[static_cast<std::size_t>(m)] = 1;
                }
            }
            Rng mark_rng = ev_rng.derive(4);
            Rng noise_rng = ev_rng.derive(5);
            Date day_date = ev.date;
            for (int day = 0; day < span; ++day) {
                std::vector<double> marks(kMinutesPerDay - 1, 0.0);
                for (int t = 1; t < kMinutesPerDay; ++t) {
                    const int g = day * kMinutesPerDay + t;
                    marks[static_cast<std::size_t>(t - 1)] =
                        hit[static_cast<std::size_t>(g)]
                            ? spec.threshold_q + 0.1 + 0.5 * std::abs(mark_rng.normal())
                            : noise_mark(noise_rng, spec.threshold_q - 0.05);
                }
                write_minute_day(minutes, ticker, day_date, marks, path_rng);
                day_date = day_date.next_business_day();
            }
        }
    }

    CsvWriter events(out_dir + "/events.csv", {"date", "announce_minute", "r_new", "delta_r", "scheduled"});
    for (const auto& ev : spec.events) {
        events.cell(ev.date.to_string())
            .cell(static_cast<long>(ev.announce_minute))
            .cell(ev.r_new)
            .cell(ev.delta_r)
            .cell(std::string(ev.scheduled ? "true" : "false"));
        events.end_row();
        nlohmann::ordered_json j;
        j["date"] = ev.date.to_string();
        j["announce_minute"] = ev.announce_minute;
        j["days"] = std::max(1, ev.days);
        j["baseline_rate"] = ev.baseline_rate;
        if (ev.before) {
            j["before"] = {{"omega", ev.before->omega}, {"expected_events", ev.before->expected_events}};
        }
        if (ev.after) {
            j["after"] = {{"omega", ev.after->omega}, {"expected_events", ev.after->expected_events}};
        }
        truth["events"].push_back(j);
    }

    std::ofstream truth_out(out_dir + "/ground_truth.json", std::ios::trunc);
    truth_out << truth.dump(2) << "\n";
}

void emit_daily_files(const DailySimSpec& spec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (spec.n_stocks < 1 || spec.n_days < 80 || spec.n_events < 1) {
        throw Error("daily sim: need stocks >= 1, days >= 80, events >= 1");
    }
    fs::create_directories(out_dir);

    std::vector<Date> dates;
    Date d = spec.start_date;
    if (d.is_weekend()) d = d.next_business_day();
    for (int i = 0; i < spec.n_days; ++i) {
        dates.push_back(d);
        d = d.next_business_day();
    }

    const int w = spec.half_width;
    const int lead = std::max(w, 16) + 1;
    const int spacing = 33; // keeps the theta windows of adjacent events apart
    std::vector<std::size_t> event_idx;
    for (int e = 0; e < spec.n_events; ++e) {
        const std::size_t idx = static_cast<std::size_t>(lead + e * spacing);
        if (idx + static_cast<std::size_t>(w) + 16 >= dates.size()) break;
        event_idx.push_back(idx);
    }
    if (event_idx.size() < 3) throw Error("daily sim: not enough days for the requested events");

    Rng master(spec.seed);
    Rng theta_rng = master.derive(1);
    std::vector<double> thetas;
    for (std::size_t e = 0; e < event_idx.size(); ++e) {
        thetas.push_back(theta_rng.uniform(-0.08, 0.12));
    }

    // delta(t): theta of the next event inside its 16-day approach window,
    // else theta of the most recent past event
    std::vector<double> delta(dates.size(), thetas[0]);
    for (std::size_t i = 0; i < dates.size(); ++i) {
        double val = thetas[0];
        bool approaching = false;
        for (std::size_t e = 0; e < event_idx.size(); ++e) {
            if (event_idx[e] >= i && event_idx[e] - i <= 16) {
                val = thetas[e];
                approaching = true;
                break;
            }
        }
        if (!approaching) {
            for (std::size_t e = 0; e < event_idx.size(); ++e) {
                if (event_idx[e] < i) val = thetas[e];
            }
        }
        delta[i] = val;
    }

    CsvWriter rates(out_dir + "/rates.csv", {"date", "target", "effective", "tbill6m"}, 17);
    for (std::size_t i = 0; i < dates.size(); ++i) {
        rates.cell(dates[i].to_string()).cell(3.0).cell(3.0 * std::exp(delta[i])).cell(3.0);
        rates.end_row();
    }

    // planted V per event; realized through the event-day range factor
    Rng vnoise_rng = master.derive(2);
    std::vector<double> v_target;
    for (std::size_t e = 0; e < event_idx.size(); ++e) {
        v_target.push_back(spec.intercept + spec.slope * thetas[e] + vnoise_rng.normal(0.0, spec.noise_v));
    }

    CsvWriter bars(out_dir + "/daily_bars.csv",
                   {"ticker", "date", "open", "high", "low", "close", "volume"}, 17);
    const double base_range = 0.02;
    const double ww = 2.0 * w + 1.0;
    for (int s = 0; s < spec.n_stocks; ++s) {
        const std::string ticker = ticker_name(s);
        Rng r = master.derive(0xda11ull + static_cast<std::uint64_t>(s));
        std::vector<double> factor(dates.size(), 1.0);
        for (std::size_t e = 0; e < event_idx.size(); ++e) {
            // v(0) = c / ((2w + c) / (2w+1)) = V  =>  c = 2w V / (2w+1 - V)
            const double V = v_target[e];
            factor[event_idx[e]] = 2.0 * w * V / (ww - V);
        }
        for (std::size_t i = 0; i < dates.size(); ++i) {
            const double range = base_range * factor[i];
            const double mid = 100.0 * (1.0 + 0.002 * r.normal());
            const double high = mid * std::exp(range / 2.0);
            const double low = mid * std::exp(-range / 2.0);
            const double volume = 1e6 * (1.0 + 0.05 * r.uniform01());
            bars.cell(ticker).cell(dates[i].to_string()).cell(mid).cell(high).cell(low).cell(mid).cell(
                volume);
            bars.end_row();
        }
    }

    CsvWriter events(out_dir + "/events.csv", {"date", "announce_minute", "r_new", "delta_r", "scheduled"});
    double r_prev = 5.0;
    nlohmann::ordered_json truth;
    truth["seed"] = spec.seed;
    truth["slope"] = spec.slope;
    truth["intercept"] = spec.intercept;
    truth["events"] = nlohmann::ordered_json::array();
    for (std::size_t e = 0; e < event_idx.size(); ++e) {
        const double dr = thetas[e] > 0.02 ? -0.25 : (thetas[e] < -0.02 ? 0.25 : 0.0);
        const double r_new = r_prev + dr;
        events.cell(dates[event_idx[e]].to_string())
            .cell(static_cast<long>(kScheduledAnnounceMinute))
            .cell(r_new)
            .cell(dr)
            .cell(std::string("true"));
        events.end_row();
        nlohmann::ordered_json j;
        j["date"] = dates[event_idx[e]].to_string();
        j["theta"] = thetas[e];
        j["v"] = v_target[e];
        truth["events"].push_back(j);
        r_prev = r_new;
    }
    std::ofstream truth_out(out_dir + "/ground_truth.json", std::ios::trunc);
    truth_out << truth.dump(2) << "\n";
}

} // namespace omorilab::synth
