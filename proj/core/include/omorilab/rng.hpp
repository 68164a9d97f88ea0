// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_RNG_HPP
#define OMORILAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace omorilab {

/// Seeded generator with hand-rolled distributions so that every sampled
/// value is bit-identical across platforms, runs, and thread counts.
/// std::mt19937_64 raw output is portable; std::*_distribution is not,
/// so we never use the standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : root_(seed), eng_(mix(seed, 0x9e3779b97f4a7c15ull)) {}

    /// Independent substream keyed by `stream`. Children derived with the
    /// same key are identical; the parent's draw state is untouched, so
    /// per-item derivation commutes with any parallel schedule.
    Rng derive(std::uint64_t stream) const { return Rng(derive_seed(stream)); }

    std::uint64_t derive_seed(std::uint64_t stream) const { return mix(root_, stream); }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform integer in [0, n), n >= 1. Rejection-free modulo is fine here:
    /// n is always tiny relative to 2^64.
    std::uint64_t uniform_int(std::uint64_t n) { return eng_() % n; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller; one value per call, the sine companion is discarded.
    double normal(double mu = 0.0, double sigma = 1.0) {
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return mu + sigma * z;
    }

    double exponential(double rate = 1.0) {
        double u = uniform01();
        if (u >= 1.0) u = std::nextafter(1.0, 0.0);
        return -std::log1p(-u) / rate;
    }

    /// Sum-of-exponentials sampler; O(mean), fine for the rates used here.
    long poisson(double mean) {
        long k = 0;
        double acc = exponential(1.0);
        while (acc <= mean) {
            ++k;
            acc += exponential(1.0);
        }
        return k;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_int(i)]);
        }
    }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        // splitmix64 avalanche over the pair.
        std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t root_;
    std::mt19937_64 eng_;
};

} // namespace omorilab

#endif
