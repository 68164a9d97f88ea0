// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>

#include "omorilab/calibration.hpp"
#include "omorilab/csv.hpp"
#include "omorilab/errors.hpp"
#include "omorilab/ingest.hpp"
#include "omorilab/metrics.hpp"
#include "omorilab/numeric.hpp"
#include "omorilab/omori.hpp"
#include "omorilab/parallel.hpp"
#include "omorilab/preprocess.hpp"
#include "omorilab/stats.hpp"
#include "omorilab/synth.hpp"

namespace omorilab::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void note(const std::string& msg) {
    std::cerr << "omorilab: " << msg << "\n";
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        std::cerr << "omorilab: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "omorilab: runtime error: " << e.what() << "\n";
        return 2;
    }
}

ordered_json test_to_json(const stats::TestResult& t) {
    ordered_json j;
    j["name"] = t.name;
    j["statistic"] = t.statistic;
    j["p_value"] = t.p_value;
    j["alpha"] = t.alpha;
    j["reject"] = t.reject;
    j["sample_sizes"] = t.sample_sizes;
    return j;
}

void write_tests_json(const std::string& path, const std::vector<stats::TestResult>& tests) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : tests) arr.push_back(test_to_json(t));
    std::ofstream out(path, std::ios::trunc);
    if (!out.is_open()) throw Error("cannot write " + path);
    out << arr.dump(2) << "\n";
}

void write_pdf_csv(const std::string& path, const stats::EmpiricalPdf& pdf) {
    CsvWriter w(path, {"bin_left", "bin_right", "density"});
    for (std::size_t b = 0; b < pdf.density.size(); ++b) {
        w.cell(pdf.edges[b]).cell(pdf.edges[b + 1]).cell(pdf.density[b]);
        w.end_row();
    }
}

std::string format_q(double q) {
    return CsvWriter::format(q, 6);
}

// Fit caps: symmetric min(T, L - T) when both sides exist, otherwise each
// side runs to its own end.
std::pair<int, int> fit_caps(int announce_minute, int grid_len) {
    const int cap = omori::default_tau_cap(announce_minute, grid_len);
    if (cap >= 3) return {cap, cap};
    return {announce_minute, grid_len - announce_minute};
}

} // namespace

// --- validate ---------------------------------------------------------------

int cmd_validate(const RunConfig& config) {
    return run_guarded([&]() -> int {
        std::vector<std::string> findings;
        std::size_t checked = 0;
        const auto check = [&](const std::string& path, auto&& loader) {
            if (path.empty()) return;
            ++checked;
            try {
                loader();
            } catch (const ValidationError& e) {
                findings.push_back(e.what());
            }
        };
        check(config.daily_bars, [&] { ingest::load_daily_bars(config.daily_bars); });
        check(config.minute_bars, [&] { ingest::load_minute_bars(config.minute_bars); });
        check(config.rates, [&] {
            const RateSeries r = ingest::load_rates(config.rates);
            if (r.fill_count > 0) {
                const std::string msg = config.rates + ": " + std::to_string(r.fill_count) +
                                        " forward-filled rate cells";
                if (config.strict) {
                    findings.push_back(msg + " (strict mode)");
                } else {
                    note(msg);
                }
            }
        });
        check(config.events, [&] { ingest::load_events(config.events); });
        check(config.sectors, [&] { ingest::load_sectors(config.sectors); });
        if (checked == 0) throw ValidationError("validate: no input files given");
        for (const auto& f : findings) std::cout << "FINDING " << f << "\n";
        std::cout << (findings.empty() ? "OK" : "INVALID") << " (" << checked << " file(s), "
                  << findings.size() << " finding(s))\n";
        return findings.empty() ? 0 : 1;
    });
}

// --- daily -------------------------------------------------------------------

int cmd_daily(const RunConfig& config) {
    return run_guarded([&]() -> int {
        if (config.daily_bars.empty() || config.rates.empty() || config.events.empty()) {
            throw ValidationError("daily: needs --daily-bars, --rates and --events");
        }
        fs::create_directories(config.out_dir);

        const auto bars = ingest::load_daily_bars(config.daily_bars);
        const TradingCalendar calendar = ingest::calendar_from_bars(bars);
        RateSeries rates = ingest::load_rates(config.rates);
        if (rates.fill_count > 0) {
            if (config.strict) {
                throw ValidationError(config.rates + ": " + std::to_string(rates.fill_count) +
                                      " forward-filled cells (strict mode)");
            }
            note(config.rates + ": forward-filled " + std::to_string(rates.fill_count) + " rate cells");
        }
        rates = ingest::align_rates(rates, calendar);
        if (rates.fill_count > 0) {
            if (config.strict) {
                throw ValidationError("rates: " + std::to_string(rates.fill_count) +
                                      " calendar dates forward-filled (strict mode)");
            }
            note("rates: forward-filled " + std::to_string(rates.fill_count) + " calendar dates");
        }
        const metrics::SpreadSeries spread = metrics::relative_spread(rates);

        auto events = ingest::load_events(config.events);
        std::erase_if(events, [&](const AnnouncementEvent& e) {
            if (!calendar.contains(e.date)) {
                note("event " + e.date.to_string() + " dropped: not a trading day in the data");
                return true;
            }
            return false;
        });
        if (events.empty()) throw ValidationError("daily: no events within the data range");

        const metrics::WeightProfile before_profile{config.lambda1, config.l1};
        const metrics::WeightProfile after_profile{config.lambda2, config.l2};

        std::vector<metrics::EventMetrics> table;
        for (const auto& ev : events) {
            metrics::EventMetrics row;
            row.event_date = ev.date;
            row.sign = ev.sign();
            try {
                row.theta = metrics::speculation_theta(spread, ev.date, before_profile);
                row.delta = metrics::surprise_delta(spread, ev, after_profile);
            } catch (const Error& e) {
                note("event " + ev.date.to_string() + " dropped: " + e.what());
                continue;
            }
            std::vector<double> v_event, phi;
            for (const auto& [ticker, series] : bars) {
                try {
                    const auto window = ingest::event_window(series, ev.date, config.window);
                    const auto norm = preprocess::normalize_window(window);
                    v_event.push_back(norm.v[static_cast<std::size_t>(config.window)]);
                    phi.push_back(preprocess::volume_weight(series, ev.date,
                                                            preprocess::VolumeBaseline::whole_period));
                } catch (const Error&) {
                    // stock lacks a full window around this event
                }
            }
            if (v_event.empty()) {
                note("event " + ev.date.to_string() + " dropped: no stock has a full window");
                continue;
            }
            const auto v = metrics::event_day_volatility(v_event, phi);
            row.v = v.value;
            row.n_stocks = v.n_stocks;
            table.push_back(row);
        }
        if (table.empty()) throw ValidationError("daily: no events with sufficient history and windows");

        {
            CsvWriter w(config.out_dir + "/event_metrics.csv",
                        {"event_date", "theta", "delta", "sign", "V", "n_stocks"});
            for (const auto& row : table) {
                w.cell(row.event_date.to_string())
                    .cell(row.theta)
                    .cell(row.delta)
                    .cell(static_cast<long>(row.sign))
                    .cell(row.v)
                    .cell(static_cast<long>(row.n_stocks));
                w.end_row();
            }
        }

        // ensemble profile with shuffle dispersion
        {
            std::vector<metrics::StockDaily> stocks;
            std::vector<std::vector<std::size_t>> event_idx;
            for (const auto& [ticker, series] : bars) {
                metrics::StockDaily sd;
                sd.ticker = ticker;
                for (const auto& b : series.bars) {
                    sd.range.push_back(preprocess::daily_range(b));
                    sd.volume.push_back(b.volume);
                }
                std::vector<std::size_t> idx;
                for (const auto& row : table) {
                    if (auto i = series.index_of(row.event_date)) idx.push_back(*i);
                }
                stocks.push_back(std::move(sd));
                event_idx.push_back(std::move(idx));
            }
            const auto profile = metrics::profile_with_dispersion(stocks, event_idx, config.window,
                                                                  config.shuffles, Rng(config.seed),
                                                                  config.threads);
            CsvWriter w(config.out_dir + "/profile.csv", {"dt", "v_mean", "v_sigma"});
            for (std::size_t k = 0; k < profile.mean.size(); ++k) {
                w.cell(static_cast<long>(k) - config.window).cell(profile.mean[k]);
                if (profile.sigma.empty()) {
                    w.cell_empty();
                } else {
                    w.cell(profile.sigma[k]);
                }
                w.end_row();
            }
        }

        // theta-V regression(s)
        std::vector<stats::TestResult> tests;
        {
            std::vector<double> theta_all, v_all, theta_chg, v_chg;
            for (const auto& row : table) {
                theta_all.push_back(row.theta);
                v_all.push_back(row.v);
            }
            for (const auto& ev : events) {
                if (ev.delta_r == 0.0) continue;
                for (const auto& row : table) {
                    if (row.event_date == ev.date) {
                        theta_chg.push_back(row.theta);
                        v_chg.push_back(row.v);
                    }
                }
            }
            const auto run_regression = [&](const std::string& label, const std::vector<double>& x,
                                            const std::vector<double>& y) {
                if (x.size() < 3) {
                    note("regression '" + label + "' skipped: only " + std::to_string(x.size()) +
                         " event(s)");
                    return;
                }
                try {
                    const auto reg = metrics::theta_volatility_regression(x, y);
                    stats::TestResult t = stats::anova_f_test(x, y);
                    t.name = "anova_f_" + label;
                    tests.push_back(t);
                    note("regression '" + label + "': m=" + CsvWriter::format(reg.slope, 6) + " +- " +
                         CsvWriter::format(reg.slope_se, 6) + ", r2=" + CsvWriter::format(reg.r2, 6) +
                         ", p=" + CsvWriter::format(reg.p_value, 6));
                } catch (const Error& e) {
                    note("regression '" + label + "' skipped: " + e.what());
                }
            };
            run_regression("all", theta_all, v_all);
            run_regression("rate_changes", theta_chg, v_chg);
        }

        // normalized-volatility pdfs, announcement days vs other days
        {
            std::set<Date> event_dates;
            for (const auto& row : table) event_dates.insert(row.event_date);
            std::vector<double> v_fomc, v_other;
            for (const auto& [ticker, series] : bars) {
                KahanSum sum;
                for (const auto& b : series.bars) sum.add(preprocess::daily_range(b));
                const double mean_range = sum.value() / static_cast<double>(series.bars.size());
                if (mean_range <= 0) continue;
                for (const auto& b : series.bars) {
                    const double v = preprocess::daily_range(b) / mean_range;
                    (event_dates.count(b.date) ? v_fomc : v_other).push_back(v);
                }
            }
            if (!v_fomc.empty() && !v_other.empty()) {
                const auto pdf_fomc = stats::empirical_pdf(v_fomc, 40);
                const auto pdf_other = stats::empirical_pdf(v_other, 40);
                write_pdf_csv(config.out_dir + "/pdf_v_fomc.csv", pdf_fomc);
                write_pdf_csv(config.out_dir + "/pdf_v_other.csv", pdf_other);
                note("mean normalized volatility: announcement days " +
                     CsvWriter::format(pdf_fomc.mean, 6) + ", other days " +
                     CsvWriter::format(pdf_other.mean, 6));
            }
        }

        write_tests_json(config.out_dir + "/tests.json", tests);
        note("daily: " + std::to_string(table.size()) + " event(s) written");
        return 0;
    });
}

// --- intraday ------------------------------------------------------------------

namespace {

struct TickerData {
    std::string ticker;
    preprocess::TickerIntraday intraday;           // scaled + detrended
    std::map<Date, std::size_t> day_index;
};

struct EventFitRow {
    Date event_date;
    std::string who; // ticker, PORTFOLIO, GROUPnn
    std::string side;
    double q;
    omori::OmoriFit fit;
    std::string method;
};

} // namespace

int cmd_intraday(const RunConfig& config) {
    return run_guarded([&]() -> int {
        if (config.minute_bars.empty() || config.events.empty()) {
            throw ValidationError("intraday: needs --minute-bars and --events");
        }
        if (config.q_list.empty()) throw ValidationError("intraday: empty --q list");
        for (std::size_t i = 1; i < config.q_list.size(); ++i) {
            if (!(config.q_list[i - 1] < config.q_list[i])) {
                throw ValidationError("intraday: --q thresholds must be ascending");
            }
        }
        fs::create_directories(config.out_dir);
        fs::create_directories(config.out_dir + "/curves");

        const auto minute_bars = ingest::load_minute_bars(config.minute_bars);
        auto events = ingest::load_events(config.events);
        SectorMap sectors;
        if (!config.sectors.empty()) sectors = ingest::load_sectors(config.sectors);

        // global minute-data calendar (union over tickers)
        std::set<Date> all_dates;
        for (const auto& [ticker, days] : minute_bars) {
            for (const auto& [date, day] : days) all_dates.insert(date);
        }
        const TradingCalendar calendar =
            TradingCalendar::from_dates(std::vector<Date>(all_dates.begin(), all_dates.end()));

        std::erase_if(events, [&](const AnnouncementEvent& e) {
            if (!calendar.contains(e.date)) {
                note("event " + e.date.to_string() + " dropped: no minute data that day");
                return true;
            }
            return false;
        });
        if (events.empty()) throw ValidationError("intraday: no qualifying (stock, event) pairs");

        const int span = std::max(1, config.multiday);

        // dates covered by any event span are excluded from pattern estimation
        std::set<Date> event_span_dates;
        for (const auto& ev : events) {
            auto idx = calendar.index_of(ev.date);
            for (int k = 0; k < span && idx && *idx + static_cast<std::size_t>(k) < calendar.size(); ++k) {
                event_span_dates.insert(calendar.at(*idx + static_cast<std::size_t>(k)));
            }
        }

        // per-ticker pipeline: raw |log returns| -> standardize -> detrend
        std::vector<TickerData> tickers;
        for (const auto& [ticker, days] : minute_bars) {
            TickerData td;
            td.ticker = ticker;
            td.intraday.ticker = ticker;
            for (const auto& [date, day] : days) {
                try {
                    td.intraday.days.push_back(preprocess::minute_volatility(day));
                } catch (const Error& e) {
                    note(std::string(e.what()) + "; day skipped");
                }
            }
            if (td.intraday.days.empty()) {
                note("ticker " + ticker + " dropped: no usable days");
                continue;
            }
            for (std::size_t i = 0; i < td.intraday.days.size(); ++i) {
                td.day_index[td.intraday.days[i].date] = i;
            }
            std::vector<std::size_t> estimation;
            for (std::size_t i = 0; i < td.intraday.days.size(); ++i) {
                if (!event_span_dates.count(td.intraday.days[i].date)) estimation.push_back(i);
            }
            try {
                preprocess::standardize(td.intraday);
                const auto pattern =
                    preprocess::estimate_pattern(td.intraday, estimation, config.pattern_min_days);
                preprocess::remove_pattern(td.intraday, pattern);
                if (config.dump_pattern) {
                    fs::create_directories(config.out_dir + "/patterns");
                    CsvWriter w(config.out_dir + "/patterns/" + ticker + ".csv", {"minute", "A"});
                    for (std::size_t i = 0; i < pattern.a.size(); ++i) {
                        w.cell(static_cast<long>(i + 1)).cell(pattern.a[i]);
                        w.end_row();
                    }
                }
            } catch (const Error& e) {
                note("ticker " + ticker + " dropped: " + e.what());
                continue;
            }
            tickers.push_back(std::move(td));
        }
        if (tickers.empty()) throw ValidationError("intraday: no qualifying (stock, event) pairs");

        const bool want_individual = std::count(config.methods.begin(), config.methods.end(), "individual");
        const bool want_portfolio = std::count(config.methods.begin(), config.methods.end(), "portfolio");
        const bool want_partial = std::count(config.methods.begin(), config.methods.end(), "partial");

        std::vector<EventFitRow> rows;
        std::vector<stats::TestResult> tests;
        struct EnsembleRow {
            Date date;
            std::string side;
            double q;
            omori::EnsembleFit ens;
        };
        std::vector<EnsembleRow> ensembles;

        // centered after-exponents per sector (q = first threshold)
        std::vector<double> centered_all;
        std::map<std::string, std::vector<double>> centered_by_sector;

        for (const auto& ev : events) {
            const int T = ev.announce_minute;
            for (double q : config.q_list) {
                // displaced curves per ticker present on the event date
                std::vector<std::string> names;
                std::vector<std::vector<double>> before_curves, after_curves;
                int grid_len = kMinutesPerDay;
                for (const auto& td : tickers) {
                    if (!td.day_index.count(ev.date)) continue;
                    std::vector<omori::EventStream> streams;
                    bool span_ok = true;
                    auto cal_idx = calendar.index_of(ev.date);
                    for (int k = 0; k < span; ++k) {
                        if (!cal_idx || *cal_idx + static_cast<std::size_t>(k) >= calendar.size()) {
                            span_ok = k > 0; // shorter tail of the sample
                            break;
                        }
                        const Date d = calendar.at(*cal_idx + static_cast<std::size_t>(k));
                        const auto it = td.day_index.find(d);
                        if (it == td.day_index.end()) {
                            span_ok = false;
                            break;
                        }
                        streams.push_back(omori::detect_events(td.intraday.days[it->second], q));
                    }
                    if (!span_ok || streams.empty()) continue;
                    omori::CumulativeCurve curve;
                    if (streams.size() == 1) {
                        curve = omori::cumulative_curve(streams[0], T);
                    } else {
                        omori::MultidayOptions mopt;
                        mopt.exclude_open_minutes = config.exclude_open_minutes;
                        curve = omori::multiday_curve(streams, T, calendar, mopt);
                    }
                    grid_len = curve.grid_len;
                    auto split = omori::split_displaced(curve);
                    names.push_back(td.ticker);
                    before_curves.push_back(std::move(split.before));
                    after_curves.push_back(std::move(split.after));
                }
                if (names.empty()) continue;

                const auto [cap_b, cap_a] = fit_caps(T, grid_len);
                omori::FitOptions opt_b, opt_a;
                opt_b.tau_max = cap_b;
                opt_a.tau_max = cap_a;

                const auto emit_side = [&](const std::string& side,
                                           const std::vector<std::vector<double>>& curves,
                                           const omori::FitOptions& opt) {
                    if (curves[0].empty()) return; // T = 0: no before side
                    std::vector<std::optional<omori::OmoriFit>> stock_fits(curves.size());
                    for (std::size_t j = 0; j < curves.size(); ++j) {
                        stock_fits[j] = omori::try_fit_omori(curves[j], opt);
                    }
                    if (want_individual) {
                        std::vector<double> omegas;
                        for (std::size_t j = 0; j < curves.size(); ++j) {
                            if (stock_fits[j]) {
                                rows.push_back({ev.date, names[j], side, q, *stock_fits[j], "individual"});
                                omegas.push_back(stock_fits[j]->omega);
                            }
                        }
                        try {
                            const auto ens = omori::ensemble_individual(curves, opt);
                            ensembles.push_back({ev.date, side, q, ens});
                            // centered exponents for the sector comparison
                            if (side == "after" && q == config.q_list.front() && omegas.size() >= 2) {
                                const double m = mean(omegas);
                                std::size_t oi = 0;
                                for (std::size_t j = 0; j < curves.size(); ++j) {
                                    if (!stock_fits[j]) continue;
                                    const double x = omegas[oi++] - m;
                                    centered_all.push_back(x);
                                    const auto sec = sectors.find(names[j]);
                                    if (sec != sectors.end()) centered_by_sector[sec->second].push_back(x);
                                }
                            }
                            // per-date t-test on before exponents
                            if (side == "before" && q == config.q_list.front() && omegas.size() >= 2) {
                                try {
                                    stats::TestResult t = stats::t_test_mean(omegas, 0.0, 0.01);
                                    t.name = "t_omega_b_" + ev.date.to_string();
                                    tests.push_back(t);
                                } catch (const Error&) {
                                }
                            }
                        } catch (const Error& e) {
                            note("individual ensemble failed (" + ev.date.to_string() + ", q=" +
                                 format_q(q) + ", " + side + "): " + e.what());
                        }
                    }
                    if (want_portfolio) {
                        try {
                            const auto ens = omori::ensemble_portfolio(curves, opt);
                            rows.push_back({ev.date, "PORTFOLIO", side, q, ens.fits[0], "portfolio"});
                            ensembles.push_back({ev.date, side, q, ens});
                        } catch (const Error& e) {
                            note("portfolio fit failed (" + ev.date.to_string() + ", q=" + format_q(q) +
                                 ", " + side + "): " + e.what());
                        }
                    }
                    if (want_partial) {
                        try {
                            const auto ens =
                                omori::ensemble_partial(curves, config.group_size, config.seed, opt);
                            for (std::size_t g = 0; g < ens.fits.size(); ++g) {
                                char buf[16];
                                std::snprintf(buf, sizeof(buf), "GROUP%02zu", g + 1);
                                rows.push_back({ev.date, buf, side, q, ens.fits[g], "partial"});
                            }
                            ensembles.push_back({ev.date, side, q, ens});
                        } catch (const Error& e) {
                            note("partial ensemble failed (" + ev.date.to_string() + ", q=" + format_q(q) +
                                 ", " + side + "): " + e.what());
                        }
                    }
                };
                emit_side("before", before_curves, opt_b);
                emit_side("after", after_curves, opt_a);

                // portfolio displaced curves for plotting
                {
                    std::vector<double> avg_b, avg_a;
                    if (!before_curves[0].empty()) avg_b = omori::portfolio_curve(before_curves);
                    avg_a = omori::portfolio_curve(after_curves);
                    CsvWriter w(config.out_dir + "/curves/" + ev.date.to_string() + "_" + format_q(q) +
                                    ".csv",
                                {"tau", "N_b", "N_a"});
                    const std::size_t len = std::max(avg_b.size(), avg_a.size());
                    for (std::size_t t = 0; t < len; ++t) {
                        w.cell(static_cast<long>(t + 1));
                        if (t < avg_b.size()) {
                            w.cell(avg_b[t]);
                        } else {
                            w.cell_empty();
                        }
                        if (t < avg_a.size()) {
                            w.cell(avg_a[t]);
                        } else {
                            w.cell_empty();
                        }
                        w.end_row();
                    }
                }
            }
        }
        if (rows.empty()) throw ValidationError("intraday: no qualifying (stock, event) pairs");

        {
            CsvWriter w(config.out_dir + "/omori_fits.csv",
                        {"event_date", "ticker_or_portfolio", "side", "q", "omega", "omega_se", "beta",
                         "beta_se", "r2", "n_events", "tau_min", "tau_max", "method"});
            for (const auto& row : rows) {
                w.cell(row.event_date.to_string())
                    .cell(row.who)
                    .cell(row.side)
                    .cell(row.q)
                    .cell(row.fit.omega)
                    .cell(row.fit.omega_se)
                    .cell(row.fit.beta)
                    .cell(row.fit.beta_se)
                    .cell(row.fit.r2)
                    .cell(row.fit.n_events)
                    .cell(static_cast<long>(row.fit.tau_min))
                    .cell(static_cast<long>(row.fit.tau_max))
                    .cell(row.method);
                w.end_row();
            }
        }
        {
            CsvWriter w(config.out_dir + "/ensembles.csv",
                        {"event_date", "side", "q", "method", "mean_omega", "sigma_omega", "n_fits",
                         "n_dropped", "group_size", "seed"});
            for (const auto& e : ensembles) {
                w.cell(e.date.to_string())
                    .cell(e.side)
                    .cell(e.q)
                    .cell(omori::method_name(e.ens.method))
                    .cell(e.ens.mean_omega)
                    .cell(e.ens.sigma_omega)
                    .cell(static_cast<long>(e.ens.fits.size()))
                    .cell(static_cast<long>(e.ens.n_dropped))
                    .cell(static_cast<long>(e.ens.group_size))
                    .cell(static_cast<long>(e.ens.method == omori::Method::partial ? e.ens.seed : 0));
                w.end_row();
            }
        }

        // announcement-day concentration of exceedances at the top threshold
        {
            const double q_top = config.q_list.back();
            std::set<Date> event_dates;
            for (const auto& ev : events) event_dates.insert(ev.date);
            stats::Exposure on, off;
            for (const auto& td : tickers) {
                for (const auto& day : td.intraday.days) {
                    std::size_t minutes = 0, exceed = 0;
                    for (std::size_t i = 0; i < day.v.size(); ++i) {
                        if (!day.mask[i]) continue;
                        ++minutes;
                        if (day.v[i] > q_top) ++exceed;
                    }
                    auto& side = event_dates.count(day.date) ? on : off;
                    side.exceedances += exceed;
                    side.minutes += minutes;
                }
            }
            if (on.minutes > 0 && off.minutes > 0 && on.exceedances + off.exceedances > 0) {
                stats::TestResult t = stats::concentration_test(on, off, 0.05);
                t.name = "concentration_q" + format_q(q_top);
                tests.push_back(t);
            } else {
                note("concentration test skipped: no exceedances at q=" + format_q(q_top));
            }
        }

        // sector shifts of centered after-exponents
        if (!centered_all.empty()) {
            write_pdf_csv(config.out_dir + "/pdf_omega_centered.csv",
                          stats::empirical_pdf(centered_all, 30));
            for (const auto& [sector, xs] : centered_by_sector) {
                if (xs.size() < 2) continue;
                try {
                    stats::TestResult t = stats::z_test_shift(xs, centered_all, 0.0005);
                    t.name = "z_sector_" + sector;
                    tests.push_back(t);
                } catch (const Error& e) {
                    note("sector test " + sector + " skipped: " + e.what());
                }
            }
        }

        write_tests_json(config.out_dir + "/tests.json", tests);
        note("intraday: " + std::to_string(rows.size()) + " fit row(s) over " +
             std::to_string(events.size()) + " event(s), " + std::to_string(tickers.size()) +
             " ticker(s)");
        return 0;
    });
}

// --- simulate -------------------------------------------------------------------

int cmd_simulate(const RunConfig& config) {
    return run_guarded([&]() -> int {
        if (config.sim_spec.empty()) throw ValidationError("simulate: needs a spec file argument");
        std::ifstream in(config.sim_spec);
        if (!in.is_open()) throw ValidationError(config.sim_spec + ": cannot open spec");
        ordered_json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ValidationError(config.sim_spec + ": invalid JSON: " + e.what());
        }
        fs::create_directories(config.out_dir);
        const std::string mode = j.value("mode", "intraday");
        try {
            if (mode == "intraday") {
                synth::MarketSimSpec spec;
                spec.seed = j.value("seed", config.seed);
                spec.n_stocks = j.value("n_stocks", 20);
                spec.threshold_q = j.value("threshold_q", 3.0);
                spec.background_days = j.value("background_days", 24);
                spec.start_date = Date::parse(j.value("start_date", "2001-01-02"));
                if (!j.contains("events") || !j["events"].is_array() || j["events"].empty()) {
                    throw Error("spec needs a non-empty 'events' array");
                }
                for (const auto& je : j["events"]) {
                    synth::MarketSimEventSpec ev;
                    ev.date = Date::parse(je.at("date").get<std::string>());
                    ev.announce_minute = je.value("announce_minute", kScheduledAnnounceMinute);
                    ev.r_new = je.value("r_new", 1.75);
                    ev.delta_r = je.value("delta_r", 0.0);
                    ev.scheduled = je.value("scheduled", true);
                    ev.baseline_rate = je.value("baseline_rate", 0.0);
                    ev.days = je.value("days", 1);
                    if (je.contains("before")) {
                        ev.before = synth::DayProcessSpec{je["before"].value("omega", 0.0),
                                                          je["before"].value("expected_events", 0.0)};
                    }
                    if (je.contains("after")) {
                        ev.after = synth::DayProcessSpec{je["after"].value("omega", 0.0),
                                                         je["after"].value("expected_events", 0.0)};
                    }
                    spec.events.push_back(ev);
                }
                synth::emit_market_files(spec, config.out_dir);
                note("simulate: wrote minute_bars.csv, events.csv, ground_truth.json (" +
                     std::to_string(spec.n_stocks) + " stocks)");
            } else if (mode == "daily") {
                synth::DailySimSpec spec;
                spec.seed = j.value("seed", config.seed);
                spec.n_stocks = j.value("n_stocks", 30);
                spec.n_days = j.value("n_days", 700);
                spec.n_events = j.value("n_events", 18);
                spec.start_date = Date::parse(j.value("start_date", "2000-01-03"));
                spec.slope = j.value("slope", 0.36);
                spec.intercept = j.value("intercept", 1.0);
                spec.noise_v = j.value("noise_v", 0.02);
                spec.half_width = j.value("half_width", 20);
                synth::emit_daily_files(spec, config.out_dir);
                note("simulate: wrote daily_bars.csv, rates.csv, events.csv, ground_truth.json");
            } else {
                throw Error("unknown mode '" + mode + "' (want intraday or daily)");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(config.sim_spec + ": " + e.what());
        } catch (const Error& e) {
            throw ValidationError(config.sim_spec + ": " + e.what());
        }
        return 0;
    });
}

// --- calibrate -------------------------------------------------------------------

int cmd_calibrate(const RunConfig& config) {
    return run_guarded([&]() -> int {
        fs::create_directories(config.out_dir);
        const auto report = calib::run_estimator_suite(config.seed, config.threads);
        ordered_json j;
        j["seed"] = config.seed;
        j["checks"] = ordered_json::array();
        for (const auto& line : report.lines) {
            std::cout << (line.pass ? "PASS" : "FAIL") << " " << line.id << ": " << line.detail << "\n";
            ordered_json c;
            c["id"] = line.id;
            c["pass"] = line.pass;
            c["detail"] = line.detail;
            j["checks"].push_back(c);
        }
        j["all_pass"] = report.all_pass;
        std::ofstream out(config.out_dir + "/calibration.json", std::ios::trunc);
        out << j.dump(2) << "\n";
        std::cout << (report.all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
        return report.all_pass ? 0 : 1;
    });
}

} // namespace omorilab::cli
