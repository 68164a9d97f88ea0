// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_NUMERIC_HPP
#define OMORILAB_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace omorilab {

/// Neumaier compensated accumulator. Reductions over many small terms
/// (pattern estimation, weighted means) go through this so results are
/// stable regardless of magnitude ordering.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline double mean(std::span<const double> xs) {
    return xs.empty() ? 0.0 : compensated_sum(xs) / static_cast<double>(xs.size());
}

/// Corrected two-pass standard deviation; ddof = 0 for population, 1 for sample.
inline double stddev(std::span<const double> xs, int ddof = 0) {
    const std::size_t n = xs.size();
    if (n <= static_cast<std::size_t>(ddof)) return 0.0;
    const double m = mean(xs);
    KahanSum sq, lin;
    for (double x : xs) {
        const double d = x - m;
        sq.add(d * d);
        lin.add(d);
    }
    const double nn = static_cast<double>(n);
    const double ss = sq.value() - lin.value() * lin.value() / nn;
    return std::sqrt(std::max(0.0, ss) / (nn - static_cast<double>(ddof)));
}

} // namespace omorilab

#endif
