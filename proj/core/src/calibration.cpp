// SPDX-License-Identifier: Apache-2.0

#include "omorilab/calibration.hpp"

#include <cmath>

#include "omorilab/csv.hpp"
#include "omorilab/numeric.hpp"
#include "omorilab/omori.hpp"
#include "omorilab/parallel.hpp"
#include "omorilab/rng.hpp"
#include "omorilab/stats.hpp"
#include "omorilab/synth.hpp"

namespace omorilab::calib {

namespace {

std::vector<double> stream_curve(const std::vector<int>& taus, int horizon) {
    std::vector<double> n(static_cast<std::size_t>(horizon), 0.0);
    for (int tau : taus) {
        if (tau >= 1 && tau <= horizon) n[static_cast<std::size_t>(tau - 1)] += 1.0;
    }
    double acc = 0;
    for (double& x : n) {
        acc += x;
        x = acc;
    }
    return n;
}

} // namespace

std::vector<RecoveryRow> omega_recovery_grid(const std::vector<double>& omegas, double expected_events,
                                             int horizon, int n_seeds, std::uint64_t seed, int threads) {
    std::vector<RecoveryRow> rows;
    Rng master(seed);
    for (std::size_t gi = 0; gi < omegas.size(); ++gi) {
        const double omega = omegas[gi];
        std::vector<double> fitted(static_cast<std::size_t>(n_seeds), 0.0);
        parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t i) {
            synth::OmoriProcessSpec spec;
            spec.omega = omega;
            spec.horizon = horizon;
            spec.beta = synth::beta_for_expected_count(expected_events, omega, horizon);
            spec.seed = master.derive_seed(gi * 1000003ull + i);
            const auto stream = synth::simulate_omori(spec);
            fitted[i] = omori::fit_omori(stream_curve(stream.taus, horizon)).omega;
        });
        RecoveryRow row;
        row.omega_true = omega;
        row.seeds = n_seeds;
        row.mean_fitted = mean(fitted);
        row.bias = row.mean_fitted - omega;
        KahanSum sq;
        for (double f : fitted) sq.add((f - omega) * (f - omega));
        row.rmse = std::sqrt(sq.value() / static_cast<double>(n_seeds));
        rows.push_back(row);
    }
    return rows;
}

double null_coverage_rate(int n_seeds, double expected_events, int horizon, std::uint64_t seed,
                          int threads) {
    Rng master(seed);
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(n_seeds), 0);
    parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t i) {
        synth::OmoriProcessSpec spec;
        spec.omega = 0.0;
        spec.horizon = horizon;
        spec.beta = expected_events / static_cast<double>(horizon);
        spec.seed = master.derive_seed(i);
        const auto stream = synth::simulate_omori(spec);
        const auto fit = omori::fit_omori(stream_curve(stream.taus, horizon));
        covered[i] = std::abs(fit.omega) <= 2.0 * fit.omega_se ? 1 : 0;
    });
    std::size_t n = 0;
    for (auto c : covered) n += c;
    return static_cast<double>(n) / static_cast<double>(n_seeds);
}

double beta_asymmetry_rate(int n_seeds, std::uint64_t seed, int threads) {
    // Portfolio of 20 synthetic market days with a weak, slow build-up
    // before the shock and a strong, fast relaxation after it.
    constexpr int kStocks = 20;
    Rng master(seed);
    std::vector<std::uint8_t> ordered(static_cast<std::size_t>(n_seeds), 0);
    parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t i) {
        std::vector<std::vector<double>> before_curves, after_curves;
        for (int s = 0; s < kStocks; ++s) {
            synth::MarketDaySpec day;
            day.announce_minute = kScheduledAnnounceMinute;
            day.before = synth::DayProcessSpec{0.1, 6.0};
            day.after = synth::DayProcessSpec{0.3, 18.0};
            day.seed = master.derive_seed(i * 1009ull + static_cast<std::uint64_t>(s));
            const auto dayres = synth::simulate_market_day(day);
            const auto stream = omori::detect_events(dayres.series, day.threshold_q);
            const auto split = omori::split_displaced(omori::cumulative_curve(stream, day.announce_minute));
            before_curves.push_back(split.before);
            after_curves.push_back(split.after);
        }
        omori::FitOptions opt;
        opt.tau_max = omori::default_tau_cap(kScheduledAnnounceMinute);
        const auto before = omori::ensemble_portfolio(before_curves, opt);
        const auto after = omori::ensemble_portfolio(after_curves, opt);
        ordered[i] = before.fits[0].beta < after.fits[0].beta ? 1 : 0;
    });
    std::size_t n = 0;
    for (auto c : ordered) n += c;
    return static_cast<double>(n) / static_cast<double>(n_seeds);
}

double q_monotonicity_rate(int n_seeds, std::uint64_t seed, int threads) {
    // Bands with larger marks decaying faster; sweep over q on a portfolio
    // of marked days.
    constexpr int kStocks = 30;
    constexpr int kHorizon = kMinutesPerDay - 1 - kScheduledAnnounceMinute; // 104
    const double qs[4] = {2.0, 3.0, 4.0, 5.0};
    const double band_omega[4] = {0.15, 0.30, 0.45, 0.60};
    const double band_events[4] = {8.0, 6.0, 4.0, 3.0};
    Rng master(seed);
    std::vector<std::uint8_t> mono(static_cast<std::size_t>(n_seeds), 0);
    parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t i) {
        std::vector<preprocess::IntradayVolatilitySeries> days;
        for (int s = 0; s < kStocks; ++s) {
            const std::uint64_t stock_seed = master.derive_seed(i * 2027ull + static_cast<std::uint64_t>(s));
            Rng stock(stock_seed);
            std::vector<synth::MarkedBand> bands;
            for (int b = 0; b < 4; ++b) {
                bands.push_back({qs[b], band_omega[b], band_events[b], stock.derive_seed(b)});
            }
            const auto stream = synth::simulate_marked_omori(bands, kHorizon);
            days.push_back(synth::marked_day(stream, kScheduledAnnounceMinute, qs[0] - 0.1,
                                             stock.derive_seed(99)));
        }
        omori::FitOptions opt;
        opt.tau_max = omori::default_tau_cap(kScheduledAnnounceMinute);
        double prev = -1e9;
        bool ok = true;
        for (double q : qs) {
            std::vector<std::vector<double>> curves;
            for (const auto& day : days) {
                const auto stream = omori::detect_events(day, q);
                curves.push_back(omori::split_displaced(omori::cumulative_curve(stream, kScheduledAnnounceMinute))
                                     .after);
            }
            const auto ens = omori::ensemble_portfolio(curves, opt);
            if (ens.fits[0].omega < prev) ok = false;
            prev = ens.fits[0].omega;
        }
        mono[i] = ok ? 1 : 0;
    });
    std::size_t n = 0;
    for (auto c : mono) n += c;
    return static_cast<double>(n) / static_cast<double>(n_seeds);
}

std::vector<TestCalibration> stat_test_calibration(int n_reps, std::uint64_t seed, int threads) {
    Rng master(seed);
    std::vector<TestCalibration> out;

    // t-test: N(0,1) samples, mu0 = 0
    {
        std::vector<std::uint8_t> rej(static_cast<std::size_t>(n_reps), 0);
        parallel_for(static_cast<std::size_t>(n_reps), threads, [&](std::size_t i) {
            Rng r = master.derive(0x7000ull + i);
            std::vector<double> x(20);
            for (auto& v : x) v = r.normal();
            rej[i] = stats::t_test_mean(x, 0.0, 0.05).reject ? 1 : 0;
        });
        std::size_t n = 0;
        for (auto c : rej) n += c;
        out.push_back({"t_test", 0.05, static_cast<double>(n) / n_reps, n_reps});
    }
    // z-test: subsample from the population's own distribution
    {
        std::vector<std::uint8_t> rej(static_cast<std::size_t>(n_reps), 0);
        parallel_for(static_cast<std::size_t>(n_reps), threads, [&](std::size_t i) {
            Rng r = master.derive(0x8000ull + i);
            std::vector<double> pop(2000), sub(50);
            for (auto& v : pop) v = r.normal();
            for (auto& v : sub) v = r.normal();
            rej[i] = stats::z_test_shift(sub, pop, 0.05).reject ? 1 : 0;
        });
        std::size_t n = 0;
        for (auto c : rej) n += c;
        out.push_back({"z_test", 0.05, static_cast<double>(n) / n_reps, n_reps});
    }
    // F-test: y independent of x
    {
        std::vector<std::uint8_t> rej(static_cast<std::size_t>(n_reps), 0);
        parallel_for(static_cast<std::size_t>(n_reps), threads, [&](std::size_t i) {
            Rng r = master.derive(0x9000ull + i);
            std::vector<double> x(30), y(30);
            for (auto& v : x) v = r.normal();
            for (auto& v : y) v = r.normal();
            rej[i] = stats::anova_f_test(x, y, 0.05).reject ? 1 : 0;
        });
        std::size_t n = 0;
        for (auto c : rej) n += c;
        out.push_back({"f_test", 0.05, static_cast<double>(n) / n_reps, n_reps});
    }
    // binomial concentration: exceedances uniform over minutes
    {
        const std::size_t total = 5000;
        const double p0 = 19.0 * 390.0 / (500.0 * 390.0); // 19 event days of 500
        std::vector<std::uint8_t> rej(static_cast<std::size_t>(n_reps), 0);
        parallel_for(static_cast<std::size_t>(n_reps), threads, [&](std::size_t i) {
            Rng r = master.derive(0xa000ull + i);
            std::size_t k = 0;
            for (std::size_t j = 0; j < total; ++j) {
                if (r.bernoulli(p0)) ++k;
            }
            stats::Exposure on{k, 19 * 390};
            stats::Exposure off{total - k, (500 - 19) * 390};
            rej[i] = stats::concentration_test(on, off, 0.05).reject ? 1 : 0;
        });
        std::size_t n = 0;
        for (auto c : rej) n += c;
        out.push_back({"concentration_test", 0.05, static_cast<double>(n) / n_reps, n_reps});
    }
    return out;
}

CalibrationReport run_estimator_suite(std::uint64_t seed, int threads) {
    CalibrationReport report;
    auto add = [&](const std::string& id, bool pass, const std::string& detail) {
        report.lines.push_back({id, pass, detail});
        report.all_pass = report.all_pass && pass;
    };

    const std::vector<double> grid(std::begin(kOmegaGrid), std::end(kOmegaGrid));
    const auto rows = omega_recovery_grid(grid, kRecoveryExpectedEvents, kRecoveryHorizon,
                                          kRecoverySeeds, seed, threads);
    for (const auto& row : rows) {
        const bool pass = std::abs(row.bias) <= kRecoveryBiasTol && row.rmse <= kRecoveryRmseTol;
        add("recovery omega=" + CsvWriter::format(row.omega_true, 4), pass,
            "mean=" + CsvWriter::format(row.mean_fitted, 6) + " bias=" + CsvWriter::format(row.bias, 6) +
                " rmse=" + CsvWriter::format(row.rmse, 6) + " (|bias|<=" +
                CsvWriter::format(kRecoveryBiasTol, 3) + ", rmse<=" + CsvWriter::format(kRecoveryRmseTol, 3) +
                ")");
    }

    const double coverage =
        null_coverage_rate(kNullSeeds, kRecoveryExpectedEvents, kRecoveryHorizon, seed + 1, threads);
    add("null_coverage", coverage >= kNullCoverageMin,
        "rate=" + CsvWriter::format(coverage, 6) + " (>=" + CsvWriter::format(kNullCoverageMin, 3) + ")");

    const double asym = beta_asymmetry_rate(kAsymmetrySeeds, seed + 2, threads);
    add("beta_asymmetry", asym >= kAsymmetryRateMin,
        "rate=" + CsvWriter::format(asym, 6) + " (>=" + CsvWriter::format(kAsymmetryRateMin, 3) + ")");

    const double mono = q_monotonicity_rate(kMonotonicSeeds, seed + 3, threads);
    add("q_monotonicity", mono >= kMonotonicRateMin,
        "rate=" + CsvWriter::format(mono, 6) + " (>=" + CsvWriter::format(kMonotonicRateMin, 3) + ")");

    for (const auto& cal : stat_test_calibration(kTestCalibrationReps, seed + 4, threads)) {
        const bool pass = std::abs(cal.rate - cal.alpha) <= kTestCalibrationTol;
        add("null_rejection " + cal.test, pass,
            "rate=" + CsvWriter::format(cal.rate, 6) + " alpha=" + CsvWriter::format(cal.alpha, 3) +
                " (|rate-alpha|<=" + CsvWriter::format(kTestCalibrationTol, 3) + ")");
    }
    return report;
}

} // namespace omorilab::calib
