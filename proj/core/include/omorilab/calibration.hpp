// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_CALIBRATION_HPP
#define OMORILAB_CALIBRATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace omorilab::calib {

// Pinned verification thresholds. The estimator suite below and the
// acceptance tests both read these; no deferred tuning.
inline constexpr double kOmegaGrid[] = {-0.2, 0.0, 0.24, 0.5};
inline constexpr double kRecoveryExpectedEvents = 500.0;
inline constexpr int kRecoveryHorizon = 285;
inline constexpr int kRecoverySeeds = 100;
inline constexpr double kRecoveryBiasTol = 0.05;
inline constexpr double kRecoveryRmseTol = 0.08;
inline constexpr int kNullSeeds = 200;
inline constexpr double kNullCoverageMin = 0.90;
inline constexpr int kAsymmetrySeeds = 100;
inline constexpr double kAsymmetryRateMin = 0.90;
inline constexpr int kMonotonicSeeds = 100;
inline constexpr double kMonotonicRateMin = 0.95;
inline constexpr int kTestCalibrationReps = 1000;
inline constexpr double kTestCalibrationTol = 0.025; // |rate - alpha|

/// Bias / RMSE of the log-log fitter against simulated truth.
struct RecoveryRow {
    double omega_true = 0;
    double mean_fitted = 0;
    double bias = 0;
    double rmse = 0;
    int seeds = 0;
};

std::vector<RecoveryRow> omega_recovery_grid(const std::vector<double>& omegas, double expected_events,
                                             int horizon, int n_seeds, std::uint64_t seed, int threads);

/// Fraction of homogeneous-Poisson seeds with |fitted omega| <= 2 SE.
double null_coverage_rate(int n_seeds, double expected_events, int horizon, std::uint64_t seed,
                          int threads);

/// Fraction of planted beta_b < beta_a market-day portfolios recovering the
/// ordering.
double beta_asymmetry_rate(int n_seeds, std::uint64_t seed, int threads);

/// Fraction of marked-process seeds with fitted omega nondecreasing over
/// q in {2, 3, 4, 5}.
double q_monotonicity_rate(int n_seeds, std::uint64_t seed, int threads);

/// Null rejection rates of the four hypothesis tests at their alpha.
struct TestCalibration {
    std::string test;
    double alpha = 0;
    double rate = 0;
    int reps = 0;
};

std::vector<TestCalibration> stat_test_calibration(int n_reps, std::uint64_t seed, int threads);

/// One pass/fail line per check, deterministic for a fixed seed.
struct CalibrationReport {
    struct Line {
        std::string id;
        bool pass = false;
        std::string detail;
    };
    std::vector<Line> lines;
    bool all_pass = true;
};

CalibrationReport run_estimator_suite(std::uint64_t seed, int threads);

} // namespace omorilab::calib

#endif
