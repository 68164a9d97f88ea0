// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_STATS_HPP
#define OMORILAB_STATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace omorilab::stats {

// --- special-functions kernel ------------------------------------------
// Self-contained so p-values are exact distribution functions with no
// statistics dependency and bit-stable across builds.

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);

/// Two-sided tail of Student's t with nu degrees of freedom.
double student_t_two_sided(double t, double nu);

/// Upper tail of the F(d1, d2) distribution.
double f_upper_tail(double f, double d1, double d2);

/// Upper tail of the standard normal.
double normal_upper_tail(double z);

/// Exact two-sided binomial p-value: total probability of outcomes no more
/// likely than the observed one (minimum-likelihood method).
double binomial_two_sided(std::size_t k, std::size_t n, double p0);

// --- tests ---------------------------------------------------------------

struct TestResult {
    std::string name;
    double statistic = 0;
    double p_value = 1;
    double alpha = 0.05;
    bool reject = false;
    std::vector<std::size_t> sample_sizes;
};

/// Exceedance counts and minute exposure for one day class.
struct Exposure {
    std::size_t exceedances = 0;
    std::size_t minutes = 0;
};

/// Are above-threshold minutes concentrated on announcement days? The null
/// expectation is minute-weighted: announcement minutes / all minutes.
/// Two-sided exact binomial on the announcement-day share.
TestResult concentration_test(const Exposure& announcement, const Exposure& other, double alpha = 0.05);

/// One-sample two-sided Student t of mean == mu0.
TestResult t_test_mean(std::span<const double> samples, double mu0, double alpha = 0.05);

/// One-sided Z of mean(subsample) > mean(population), population sigma known.
TestResult z_test_shift(std::span<const double> subsample, std::span<const double> population,
                        double alpha = 0.0005);

/// ANOVA F-test of slope == 0 in the simple OLS of y on x.
TestResult anova_f_test(std::span<const double> x, std::span<const double> y, double alpha = 0.05);

// --- empirical distributions ----------------------------------------------

struct EmpiricalPdf {
    std::vector<double> edges;   // n_bins + 1
    std::vector<double> density; // n_bins; sum(density * width) == 1
    std::size_t count = 0;
    double mean = 0;
};

EmpiricalPdf empirical_pdf(std::span<const double> values, int n_bins, bool log_bins = false);

} // namespace omorilab::stats

#endif
