// SPDX-License-Identifier: Apache-2.0

#include "omorilab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "omorilab/errors.hpp"
#include "omorilab/numeric.hpp"

namespace omorilab::stats {

namespace {

// Continued fraction for the incomplete beta, modified Lentz method.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double ln_binom_pmf(std::size_t k, std::size_t n, double p) {
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    return std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * std::log(p) +
           (nn - kk) * std::log1p(-p);
}

} // namespace

double reg_incomplete_beta(double a, double b, double x) {
    if (a <= 0 || b <= 0) throw Error("reg_incomplete_beta: a, b must be positive");
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double reg_lower_gamma(double a, double x) {
    if (a <= 0) throw Error("reg_lower_gamma: a must be positive");
    if (x <= 0) return 0.0;
    if (x < a + 1.0) {
        // series representation
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 3e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for the upper tail
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 3e-16) break;
    }
    return 1.0 - h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double student_t_two_sided(double t, double nu) {
    if (nu <= 0) throw Error("student_t_two_sided: nu must be positive");
    if (!std::isfinite(t)) return 0.0;
    return reg_incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
}

double f_upper_tail(double f, double d1, double d2) {
    if (d1 <= 0 || d2 <= 0) throw Error("f_upper_tail: degrees of freedom must be positive");
    if (!std::isfinite(f)) return 0.0;
    if (f <= 0) return 1.0;
    return reg_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double binomial_two_sided(std::size_t k, std::size_t n, double p0) {
    if (n == 0) throw Error("binomial_two_sided: n must be positive");
    if (p0 <= 0 || p0 >= 1) throw Error("binomial_two_sided: p0 must be in (0, 1)");
    const double ln_obs = ln_binom_pmf(k, n, p0);
    KahanSum p;
    for (std::size_t i = 0; i <= n; ++i) {
        const double ln_i = ln_binom_pmf(i, n, p0);
        if (ln_i <= ln_obs + 1e-7) p.add(std::exp(ln_i));
    }
    return std::min(1.0, p.value());
}

TestResult concentration_test(const Exposure& announcement, const Exposure& other, double alpha) {
    if (announcement.minutes == 0 || other.minutes == 0) {
        throw Error("concentration_test: both day classes must be non-empty");
    }
    const std::size_t total = announcement.exceedances + other.exceedances;
    if (total == 0) throw Error("concentration_test: zero total exceedances");
    const double expected =
        static_cast<double>(announcement.minutes) / static_cast<double>(announcement.minutes + other.minutes);
    TestResult res;
    res.name = "concentration";
    res.alpha = alpha;
    res.sample_sizes = {announcement.exceedances, total};
    const double observed = static_cast<double>(announcement.exceedances) / static_cast<double>(total);
    res.statistic = observed / expected; // concentration ratio, 1 under the null
    res.p_value = binomial_two_sided(announcement.exceedances, total, expected);
    res.reject = res.p_value < alpha;
    return res;
}

TestResult t_test_mean(std::span<const double> samples, double mu0, double alpha) {
    const std::size_t n = samples.size();
    if (n < 2) throw Error("t_test_mean: need n >= 2");
    const double m = mean(samples);
    const double sd = stddev(samples, 1);
    if (sd <= 0) throw Error("t_test_mean: zero variance sample");
    TestResult res;
    res.name = "t_mean";
    res.alpha = alpha;
    res.sample_sizes = {n};
    res.statistic = (m - mu0) / (sd / std::sqrt(static_cast<double>(n)));
    res.p_value = student_t_two_sided(res.statistic, static_cast<double>(n - 1));
    res.reject = res.p_value < alpha;
    return res;
}

TestResult z_test_shift(std::span<const double> subsample, std::span<const double> population,
                        double alpha) {
    if (subsample.size() < 2) throw Error("z_test_shift: subsample needs n >= 2");
    if (population.size() < 2) throw Error("z_test_shift: population needs n >= 2");
    const double sigma = stddev(population, 0);
    if (sigma <= 0) throw Error("z_test_shift: degenerate population");
    TestResult res;
    res.name = "z_shift";
    res.alpha = alpha;
    res.sample_sizes = {subsample.size(), population.size()};
    res.statistic = (mean(subsample) - mean(population)) /
                    (sigma / std::sqrt(static_cast<double>(subsample.size())));
    res.p_value = normal_upper_tail(res.statistic);
    res.reject = res.p_value < alpha;
    return res;
}

TestResult anova_f_test(std::span<const double> x, std::span<const double> y, double alpha) {
    const std::size_t n = x.size();
    if (n != y.size()) throw Error("anova_f_test: size mismatch");
    if (n < 3) throw Error("anova_f_test: need >= 3 pairs");
    const double xb = mean(x);
    const double yb = mean(y);
    KahanSum sxx, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((x[i] - xb) * (x[i] - xb));
        sxy.add((x[i] - xb) * (y[i] - yb));
    }
    if (sxx.value() <= 0) throw Error("anova_f_test: degenerate x");
    const double slope = sxy.value() / sxx.value();
    KahanSum ss_res;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (yb + slope * (x[i] - xb));
        ss_res.add(r * r);
    }
    const double msr = slope * slope * sxx.value();
    const double mse = ss_res.value() / static_cast<double>(n - 2);
    TestResult res;
    res.name = "anova_f";
    res.alpha = alpha;
    res.sample_sizes = {n};
    if (mse <= 0) {
        // zero-residual limit: exact linear data
        res.statistic = std::numeric_limits<double>::infinity();
        res.p_value = 0.0;
    } else {
        res.statistic = msr / mse;
        res.p_value = f_upper_tail(res.statistic, 1.0, static_cast<double>(n - 2));
    }
    res.reject = res.p_value < alpha;
    return res;
}

EmpiricalPdf empirical_pdf(std::span<const double> values, int n_bins, bool log_bins) {
    if (values.empty()) throw Error("empirical_pdf: empty input");
    if (n_bins < 2) throw Error("empirical_pdf: need >= 2 bins");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (log_bins && lo <= 0) throw Error("empirical_pdf: log bins need positive values");
    if (hi == lo) {
        // all values equal: one occupied bin around the point
        const double pad = std::max(1e-12, std::abs(lo) * 1e-9);
        lo -= pad;
        hi += pad;
    }
    EmpiricalPdf out;
    out.count = values.size();
    out.mean = mean(values);
    out.edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i) {
        const double f = static_cast<double>(i) / n_bins;
        out.edges[static_cast<std::size_t>(i)] =
            log_bins ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
    for (double v : values) {
        std::size_t bin;
        if (v >= out.edges[static_cast<std::size_t>(n_bins)]) {
            bin = static_cast<std::size_t>(n_bins) - 1;
        } else {
            const auto it = std::upper_bound(out.edges.begin(), out.edges.end(), v);
            bin = it == out.edges.begin() ? 0 : static_cast<std::size_t>(it - out.edges.begin() - 1);
            bin = std::min(bin, static_cast<std::size_t>(n_bins) - 1);
        }
        ++counts[bin];
    }
    out.density.resize(static_cast<std::size_t>(n_bins));
    const double total = static_cast<double>(values.size());
    for (std::size_t b = 0; b < out.density.size(); ++b) {
        const double width = out.edges[b + 1] - out.edges[b];
        out.density[b] = static_cast<double>(counts[b]) / (total * width);
    }
    return out;
}

} // namespace omorilab::stats
