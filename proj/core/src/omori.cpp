// SPDX-License-Identifier: Apache-2.0

#include "omorilab/omori.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "omorilab/errors.hpp"
#include "omorilab/numeric.hpp"

namespace omorilab::omori {

EventStream detect_events(const preprocess::IntradayVolatilitySeries& series, double q) {
    if (q <= 0) throw Error("detect_events: threshold must be positive");
    EventStream out;
    out.ticker = series.ticker;
    out.date = series.date;
    out.q = q;
    for (std::size_t i = 0; i < series.v.size(); ++i) {
        if (series.mask[i] && series.v[i] > q) out.minutes.push_back(static_cast<int>(i) + 1);
    }
    return out;
}

CumulativeCurve cumulative_curve(const EventStream& stream, int announce_minute, int grid_len) {
    if (announce_minute < 0 || announce_minute >= grid_len) {
        throw Error("announcement minute " + std::to_string(announce_minute) + " outside grid");
    }
    CumulativeCurve out;
    out.grid_len = grid_len;
    out.announce_minute = announce_minute;
    out.n.assign(static_cast<std::size_t>(grid_len), 0.0);
    for (int m : stream.minutes) {
        if (m < 1 || m >= grid_len) throw Error("event minute " + std::to_string(m) + " outside grid");
        out.n[static_cast<std::size_t>(m)] += 1.0;
    }
    double acc = 0;
    for (double& x : out.n) {
        acc += x;
        x = acc;
    }
    return out;
}

DisplacedCurves split_displaced(const CumulativeCurve& curve) {
    const int T = curve.announce_minute;
    const int L = curve.grid_len;
    if (T < 0 || T >= L) throw Error("announcement minute outside grid");
    DisplacedCurves out;
    out.announce_minute = T;
    out.before_empty = T == 0;

    const auto N = [&](int t) { return t < 0 ? 0.0 : curve.n[static_cast<std::size_t>(t)]; };
    // Events at exactly T belong to the after side at tau = 1.
    const double at_or_before_Tm1 = N(T - 1);

    out.before.resize(static_cast<std::size_t>(T));
    for (int tau = 1; tau <= T; ++tau) {
        out.before[static_cast<std::size_t>(tau - 1)] = at_or_before_Tm1 - N(T - tau - 1);
    }
    out.after.resize(static_cast<std::size_t>(L - T));
    for (int tau = 1; tau <= L - T; ++tau) {
        const int t = std::min(T + tau, L - 1);
        out.after[static_cast<std::size_t>(tau - 1)] = N(t) - at_or_before_Tm1;
    }
    return out;
}

int default_tau_cap(int announce_minute, int grid_len) {
    return std::min(announce_minute, grid_len - announce_minute);
}

OmoriFit fit_omori(std::span<const double> n_tau, const FitOptions& options) {
    const int len = static_cast<int>(n_tau.size());
    const int tau_min = options.tau_min;
    const int tau_max = options.tau_max > 0 ? std::min(options.tau_max, len) : len;
    if (tau_min < 1) throw FitError("fit range must start at tau >= 1");
    if (tau_min >= tau_max) throw FitError("degenerate fit range [" + std::to_string(tau_min) + ", " +
                                           std::to_string(tau_max) + "]");

    std::vector<double> xs, ys, taus;
    std::size_t zero_excluded = 0;
    for (int tau = tau_min; tau <= tau_max; ++tau) {
        const double n = n_tau[static_cast<std::size_t>(tau - 1)];
        if (n > 0) {
            taus.push_back(tau);
            xs.push_back(std::log(static_cast<double>(tau)));
            ys.push_back(std::log(n));
        } else {
            ++zero_excluded;
        }
    }
    const std::size_t np = xs.size();
    if (np == 0) throw FitError("all N(tau) are zero in the fit range");
    if (np < 3) throw FitError("need >= 3 distinct tau with N > 0, have " + std::to_string(np));

    const double xb = mean(xs);
    const double yb = mean(ys);
    KahanSum sxx, sxy, syy;
    for (std::size_t i = 0; i < np; ++i) {
        sxx.add((xs[i] - xb) * (xs[i] - xb));
        sxy.add((xs[i] - xb) * (ys[i] - yb));
        syy.add((ys[i] - yb) * (ys[i] - yb));
    }
    if (sxx.value() <= 0) throw FitError("degenerate tau support");
    const double slope = sxy.value() / sxx.value();
    const double inter = yb - slope * xb;

    OmoriFit fit;
    fit.omega = 1.0 - slope;
    fit.beta = std::exp(inter);
    fit.tau_min = tau_min;
    fit.tau_max = tau_max;
    fit.n_points = np;
    fit.n_zero_excluded = zero_excluded;
    fit.n_events = n_tau[static_cast<std::size_t>(tau_max - 1)];

    KahanSum ss_res;
    for (std::size_t i = 0; i < np; ++i) {
        const double r = ys[i] - (inter + slope * xs[i]);
        ss_res.add(r * r);
    }
    fit.r2 = syy.value() > 0 ? 1.0 - ss_res.value() / syy.value() : 1.0;

    // The regression points come from one cumulative counting process, so
    // their log deviations are strongly correlated: Cov(N(s), N(t)) =
    // Lambda(min(s,t)) for a Poisson stream. Propagating that covariance
    // through the OLS weight vectors gives calibrated parameter errors;
    // i.i.d.-residual formulas understate them by an order of magnitude.
    // Delta method: Cov(ln N(s), ln N(t)) ~= Lambda(min)/(Lambda(s)Lambda(t)).
    const double sxxv = sxx.value();
    std::vector<double> lam(np);
    for (std::size_t i = 0; i < np; ++i) {
        lam[i] = fit.beta * std::pow(taus[i], 1.0 - fit.omega);
    }
    KahanSum var_slope, var_inter;
    const double inv_n = 1.0 / static_cast<double>(np);
    for (std::size_t i = 0; i < np; ++i) {
        const double wi = (xs[i] - xb) / sxxv;
        const double ui = inv_n - xb * wi;
        const double cii = 1.0 / (lam[i] * options.replicates);
        var_slope.add(wi * wi * cii);
        var_inter.add(ui * ui * cii);
        for (std::size_t j = i + 1; j < np; ++j) {
            const double lmin = std::min(lam[i], lam[j]);
            const double cij = lmin / (lam[i] * lam[j] * options.replicates);
            const double wj = (xs[j] - xb) / sxxv;
            const double uj = inv_n - xb * wj;
            var_slope.add(2.0 * wi * wj * cij);
            var_inter.add(2.0 * ui * uj * cij);
        }
    }
    fit.omega_se = std::sqrt(std::max(0.0, var_slope.value()));
    fit.beta_se = fit.beta * std::sqrt(std::max(0.0, var_inter.value()));
    return fit;
}

std::optional<OmoriFit> try_fit_omori(std::span<const double> n_tau, const FitOptions& options) {
    try {
        return fit_omori(n_tau, options);
    } catch (const FitError&) {
        return std::nullopt;
    }
}

std::vector<double> portfolio_curve(std::span<const std::vector<double>> curves) {
    if (curves.empty()) throw Error("portfolio_curve: empty set");
    const std::size_t len = curves[0].size();
    for (const auto& c : curves) {
        if (c.size() != len) throw Error("portfolio_curve: curves must share the grid");
    }
    std::vector<double> out(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        KahanSum s;
        for (const auto& c : curves) s.add(c[k]);
        out[k] = s.value() / static_cast<double>(curves.size());
    }
    return out;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::individual: return "individual";
        case Method::portfolio: return "portfolio";
        case Method::partial: return "partial";
    }
    return "?";
}

namespace {

EnsembleFit summarize(Method method, std::vector<OmoriFit> fits, std::size_t n_stocks,
                      std::size_t group_size, std::size_t dropped, std::uint64_t seed) {
    if (fits.empty()) throw Error("ensemble_fit: every group was dropped (no events)");
    EnsembleFit out;
    out.method = method;
    out.n_stocks = n_stocks;
    out.group_size = group_size;
    out.n_dropped = dropped;
    out.seed = seed;
    std::vector<double> omegas;
    omegas.reserve(fits.size());
    for (const auto& f : fits) omegas.push_back(f.omega);
    out.mean_omega = mean(omegas);
    out.sigma_omega = omegas.size() > 1 ? stddev(omegas, 1) : 0.0;
    out.fits = std::move(fits);
    return out;
}

} // namespace

EnsembleFit ensemble_individual(std::span<const std::vector<double>> curves, const FitOptions& options) {
    if (curves.empty()) throw Error("ensemble_fit: empty set");
    std::vector<OmoriFit> fits;
    std::size_t dropped = 0;
    for (const auto& c : curves) {
        if (auto f = try_fit_omori(c, options)) {
            fits.push_back(*f);
        } else {
            ++dropped;
        }
    }
    return summarize(Method::individual, std::move(fits), curves.size(), 1, dropped, 0);
}

EnsembleFit ensemble_portfolio(std::span<const std::vector<double>> curves, const FitOptions& options) {
    if (curves.empty()) throw Error("ensemble_fit: empty set");
    FitOptions opt = options;
    opt.replicates = static_cast<double>(curves.size());
    std::vector<OmoriFit> fits = {fit_omori(portfolio_curve(curves), opt)};
    return summarize(Method::portfolio, std::move(fits), curves.size(), curves.size(), 0, 0);
}

EnsembleFit ensemble_partial(std::span<const std::vector<double>> curves, std::size_t group_size,
                             std::uint64_t seed, const FitOptions& options) {
    if (curves.empty()) throw Error("ensemble_fit: empty set");
    if (group_size == 0) throw Error("ensemble_fit: group size must be >= 1");
    const std::size_t S = curves.size();
    std::vector<std::size_t> order(S);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<OmoriFit> fits;
    std::size_t dropped = 0;
    for (std::size_t start = 0; start < S; start += group_size) {
        const std::size_t end = std::min(start + group_size, S);
        std::vector<std::vector<double>> group;
        group.reserve(end - start);
        for (std::size_t i = start; i < end; ++i) group.push_back(curves[order[i]]);
        FitOptions opt = options;
        opt.replicates = static_cast<double>(group.size());
        if (auto f = try_fit_omori(portfolio_curve(group), opt)) {
            fits.push_back(*f);
        } else {
            ++dropped;
        }
    }
    return summarize(Method::partial, std::move(fits), S, group_size, dropped, seed);
}

std::vector<SweepEntry> omega_q_sweep(const preprocess::IntradayVolatilitySeries& series,
                                      std::span<const double> q_list, int announce_minute) {
    if (q_list.empty()) throw Error("omega_q_sweep: empty threshold list");
    for (std::size_t i = 1; i < q_list.size(); ++i) {
        if (!(q_list[i - 1] < q_list[i])) throw Error("omega_q_sweep: thresholds must be ascending");
    }
    const int cap = default_tau_cap(announce_minute);
    std::vector<SweepEntry> out;
    out.reserve(q_list.size());
    for (double q : q_list) {
        SweepEntry entry;
        entry.q = q;
        const EventStream stream = detect_events(series, q);
        if (!stream.minutes.empty()) {
            const DisplacedCurves dc = split_displaced(cumulative_curve(stream, announce_minute));
            FitOptions opt;
            opt.tau_max = cap;
            if (!dc.before.empty()) entry.before = try_fit_omori(dc.before, opt);
            entry.after = try_fit_omori(dc.after, opt);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

CumulativeCurve multiday_curve(std::span<const EventStream> days, int announce_minute,
                               const TradingCalendar& calendar, const MultidayOptions& options) {
    if (days.empty()) throw Error("multiday_curve: no days");
    std::optional<std::size_t> prev;
    for (const auto& d : days) {
        const auto idx = calendar.index_of(d.date);
        if (!idx) throw Error("multiday_curve: " + d.date.to_string() + " is not on the calendar");
        if (prev && *idx != *prev + 1) {
            throw Error("multiday_curve: " + d.date.to_string() + " is not the next trading day");
        }
        prev = idx;
    }
    const int n_days = static_cast<int>(days.size());
    EventStream combined;
    combined.ticker = days[0].ticker;
    combined.date = days[0].date;
    combined.q = days[0].q;
    for (int d = 0; d < n_days; ++d) {
        for (int m : days[static_cast<std::size_t>(d)].minutes) {
            if (d > 0 && m < options.exclude_open_minutes) continue; // opening effects masked
            combined.minutes.push_back(d * kMinutesPerDay + m);
        }
    }
    std::sort(combined.minutes.begin(), combined.minutes.end());
    return cumulative_curve(combined, announce_minute, n_days * kMinutesPerDay);
}

} // namespace omorilab::omori
