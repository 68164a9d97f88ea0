// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_OMORI_HPP
#define OMORILAB_OMORI_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omorilab/data.hpp"
#include "omorilab/preprocess.hpp"
#include "omorilab/rng.hpp"

namespace omorilab::omori {

/// Minutes where v(t) > q (strict). Detection emits strictly increasing
/// minutes; synthetic streams may carry multiplicity (repeated minutes).
struct EventStream {
    std::string ticker;
    Date date;
    double q = 0;
    std::vector<int> minutes; // sorted non-decreasing, values >= 1
};

/// Masked minutes never qualify. An empty stream is a valid result.
EventStream detect_events(const preprocess::IntradayVolatilitySeries& series, double q);

/// N(t) = number of events at minutes <= t, on the (possibly multi-day) grid.
struct CumulativeCurve {
    int grid_len = kMinutesPerDay;
    int announce_minute = 0;
    std::vector<double> n; // size grid_len, prefix counts

    double total() const { return n.empty() ? 0.0 : n.back(); }
};

CumulativeCurve cumulative_curve(const EventStream& stream, int announce_minute,
                                 int grid_len = kMinutesPerDay);

/// Before / after counts in displaced time tau = |t - T| >= 1.
/// before[k] = N_b(tau = k+1), events within k+1 minutes before T;
/// after[k]  = N_a(tau = k+1), events within k+1 minutes after T.
/// An event exactly at minute T counts on the after side at tau = 1.
struct DisplacedCurves {
    int announce_minute = 0;
    std::vector<double> before; // size T
    std::vector<double> after;  // size grid_len - T
    bool before_empty = false;  // T == 0: nothing can precede the shock
};

DisplacedCurves split_displaced(const CumulativeCurve& curve);

/// Symmetric same-day fit cap: min(T, grid_len - T).
int default_tau_cap(int announce_minute, int grid_len = kMinutesPerDay);

struct FitOptions {
    int tau_min = 1;
    int tau_max = 0;          // 0 = full length of the curve
    double replicates = 1.0;  // curves averaged into the input (portfolio size)
};

/// Power-law fit of the cumulative response, N(tau) = beta * tau^(1-omega).
/// Standard errors are propagated through the OLS weights using the Poisson
/// counting covariance of the cumulative curve; see fit_omori.
struct OmoriFit {
    double omega = 0;
    double beta = 0;
    double omega_se = 0;
    double beta_se = 0;
    double r2 = 0;
    int tau_min = 1;
    int tau_max = 0;
    std::size_t n_points = 0;     // log-log regression points used
    std::size_t n_zero_excluded = 0; // in-range taus with N = 0 (log undefined)
    double n_events = 0;          // N at the end of the fit range
};

/// OLS of ln N(tau) on ln tau at every integer tau in range with N > 0.
/// Slope s gives omega = 1 - s; intercept c gives beta = e^c. Negative
/// omega is permitted. Throws FitError on a degenerate range or < 3 points.
OmoriFit fit_omori(std::span<const double> n_tau, const FitOptions& options = {});

/// std::nullopt instead of FitError (for threshold sweeps).
std::optional<OmoriFit> try_fit_omori(std::span<const double> n_tau, const FitOptions& options = {});

/// Pointwise average of equal-length curves; fractional values expected.
std::vector<double> portfolio_curve(std::span<const std::vector<double>> curves);

enum class Method { individual, portfolio, partial };

std::string method_name(Method m);

/// Cross-stock aggregate of one side's displaced curves.
struct EnsembleFit {
    Method method = Method::individual;
    double mean_omega = 0;
    double sigma_omega = 0;
    std::size_t group_size = 0; // M for partial, 1 individual, S portfolio
    std::size_t n_stocks = 0;
    std::size_t n_dropped = 0;  // stocks/groups without a feasible fit
    std::uint64_t seed = 0;     // grouping seed (partial method)
    std::vector<OmoriFit> fits; // per stock / per group / the single portfolio fit
};

/// Mean and sample std of per-stock exponents; stocks whose fit is
/// infeasible are dropped (counted), error when all drop.
EnsembleFit ensemble_individual(std::span<const std::vector<double>> curves, const FitOptions& options);

/// Single fit of the cross-stock average curve.
EnsembleFit ensemble_portfolio(std::span<const std::vector<double>> curves, const FitOptions& options);

/// Stocks partitioned into ceil(S/M) groups in a seeded random order; each
/// group's average curve is fitted; mean/std over groups. M = S reproduces
/// the portfolio method.
EnsembleFit ensemble_partial(std::span<const std::vector<double>> curves, std::size_t group_size,
                             std::uint64_t seed, const FitOptions& options);

/// Before/after fits per threshold. Thresholds yielding too few events are
/// reported absent, not errors.
struct SweepEntry {
    double q = 0;
    std::optional<OmoriFit> before;
    std::optional<OmoriFit> after;
};

std::vector<SweepEntry> omega_q_sweep(const preprocess::IntradayVolatilitySeries& series,
                                      std::span<const double> q_list, int announce_minute);

struct MultidayOptions {
    /// Drop events in the first N minutes of each continuation day
    /// (opening effects); 0 keeps everything.
    int exclude_open_minutes = 0;
};

/// Concatenate consecutive trading days (announcement day first) onto one
/// grid of days x 390 minutes; overnight gaps carry no grid points. Streams
/// must be same-ticker days consecutive on `calendar`.
CumulativeCurve multiday_curve(std::span<const EventStream> days, int announce_minute,
                               const TradingCalendar& calendar, const MultidayOptions& options = {});

} // namespace omorilab::omori

#endif
