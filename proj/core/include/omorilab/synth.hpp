// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_SYNTH_HPP
#define OMORILAB_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omorilab/data.hpp"
#include "omorilab/metrics.hpp"
#include "omorilab/omori.hpp"
#include "omorilab/preprocess.hpp"

namespace omorilab::synth {

/// Ground-truth point process with intensity n(tau) = beta (1-omega) tau^-omega
/// on displaced minutes tau >= 1, so the cumulative count obeys
/// N(tau) = beta tau^(1-omega). Requires omega < 1.
struct OmoriProcessSpec {
    double omega = 0;
    double beta = 1;
    int horizon = kMinutesPerDay - kScheduledAnnounceMinute; // minutes
    enum class Side { before, after } side = Side::after;
    std::uint64_t seed = 0;
};

double expected_count(const OmoriProcessSpec& spec); // beta * horizon^(1-omega)
double beta_for_expected_count(double expected, double omega, int horizon);

/// Simulated displaced event minutes, multiplicity retained (several events
/// may share a minute; cumulative curves then jump by the multiplicity).
struct SimulatedStream {
    std::vector<int> taus; // sorted, >= 1
    double acceptance_rate = 1.0;
    std::size_t proposed = 0;
    std::size_t accepted = 0;
    std::size_t direct = 0; // events placed analytically in the first minute
};

/// Inhomogeneous Poisson sampling. The first minute's mass Lambda(1) = beta
/// (the integrable tau -> 0 singularity) is drawn analytically; the rest is
/// thinned against the constant dominating rate sup n(tau) over (1, horizon],
/// which sits at tau = 1 for omega >= 0 and at the horizon for omega < 0.
/// Continuous times in (k-1, k] snap to grid minute k, so the expected
/// cumulative count equals beta tau^(1-omega) at every integer tau.
SimulatedStream simulate_omori(const OmoriProcessSpec& spec);

/// One mark band: events above threshold q (marks drawn in (q, q_next])
/// with their own decay exponent. Bands with larger q carry larger omega so
/// big exceedances cluster more tightly around the shock.
struct MarkedBand {
    double q = 3;
    double omega = 0.3;
    double expected_count = 100;
    std::uint64_t seed = 0;
};

struct MarkedEvent {
    int tau = 1;
    double mark = 0;
};

/// Union stream over bands; band thresholds must be strictly ascending.
/// A single band reproduces simulate_omori for that band's seed.
std::vector<MarkedEvent> simulate_marked_omori(std::span<const MarkedBand> bands, int horizon);

/// Embed an after-side marked stream into a detrended day series at
/// announcement minute T: the mark at minute T + tau is the max over the
/// stream's entries there, sub-threshold noise fills the rest of the day.
preprocess::IntradayVolatilitySeries marked_day(std::span<const MarkedEvent> stream, int announce_minute,
                                                double noise_below, std::uint64_t noise_seed,
                                                const std::string& ticker = "SYN", Date date = Date());

/// One side of a synthetic market day.
struct DayProcessSpec {
    double omega = 0;
    double expected_events = 0; // over that side's horizon
};

struct MarketDaySpec {
    int announce_minute = kScheduledAnnounceMinute;
    std::optional<DayProcessSpec> before;
    std::optional<DayProcessSpec> after;
    double baseline_rate = 0; // exceedance probability per minute, both sides
    double threshold_q = 3.0;
    std::uint64_t seed = 0;
    std::string ticker = "SYN";
    Date date;
};

/// Day series plus the planted exceedance minutes. Marks above threshold_q
/// occur exactly at the planted minutes; everything else is half-normal
/// noise (unit std) capped below the threshold. Minute-grid planting is
/// Bernoulli with p(k) = Lambda(k) - Lambda(k-1), the at-most-one-event
/// per-minute analogue of the Omori intensity, so E[N(tau)] matches
/// beta tau^(1-omega) exactly; this requires beta <= 1 per side.
struct SyntheticDay {
    preprocess::IntradayVolatilitySeries series;
    omori::EventStream planted;
    MarketDaySpec spec;
};

SyntheticDay simulate_market_day(const MarketDaySpec& spec);

/// Rates fragment whose computed theta and surprise equal the targets.
struct RateScenario {
    RateSeries rates;
    AnnouncementEvent event;
};

RateScenario simulate_rate_scenario(double theta_target, double delta_target,
                                    const AnnouncementEvent& event,
                                    const metrics::WeightProfile& before_profile = {},
                                    const metrics::WeightProfile& after_profile = {});

// --- file emission (schemas of ingest) ------------------------------------

struct MarketSimEventSpec {
    Date date;
    int announce_minute = kScheduledAnnounceMinute;
    double r_new = 1.75;
    double delta_r = 0;
    bool scheduled = true;
    std::optional<DayProcessSpec> before;
    std::optional<DayProcessSpec> after;
    double baseline_rate = 0;
    int days = 1; // multiday span including the announcement day
};

/// Synthetic intraday market: n_stocks tickers over background days (used
/// for pattern estimation) plus the event days. Background-day marks have
/// per-minute cross-day mean exactly 1, so the standardize + detrend
/// pipeline reproduces planted marks and detection recovers the planted
/// streams end-to-end from files.
struct MarketSimSpec {
    std::uint64_t seed = 1;
    int n_stocks = 20;
    double threshold_q = 3.0;
    int background_days = 24; // rounded up to even
    Date start_date = Date(2001, 1, 2);
    std::vector<MarketSimEventSpec> events;
};

/// Writes minute_bars.csv, events.csv, ground_truth.json into out_dir.
void emit_market_files(const MarketSimSpec& spec, const std::string& out_dir);

/// Synthetic daily market with planted theta -> V line.
struct DailySimSpec {
    std::uint64_t seed = 1;
    int n_stocks = 30;
    int n_days = 700;
    int n_events = 18;
    Date start_date = Date(2000, 1, 3);
    double slope = 0.36;
    double intercept = 1.0;
    double noise_v = 0.02;   // sd of the V residual via range noise
    int half_width = 20;
};

/// Writes daily_bars.csv, rates.csv, events.csv, ground_truth.json.
void emit_daily_files(const DailySimSpec& spec, const std::string& out_dir);

} // namespace omorilab::synth

#endif
