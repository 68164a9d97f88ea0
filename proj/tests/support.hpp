// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_TESTS_SUPPORT_HPP
#define OMORILAB_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("omorilab_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// --- independent oracles (kept free of the library's code paths) ------------

/// Plain two-pass weighted mean: sum(v*w)/sum(w) with long double accumulation.
inline double oracle_weighted_mean(const std::vector<double>& v, const std::vector<double>& w) {
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        num += static_cast<long double>(v[i]) * w[i];
        den += w[i];
    }
    return static_cast<double>(num / den);
}

inline double oracle_mean(const std::vector<double>& v) {
    long double s = 0;
    for (double x : v) s += x;
    return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline double oracle_stddev(const std::vector<double>& v, int ddof = 0) {
    const long double m = oracle_mean(v);
    long double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return static_cast<double>(std::sqrt(s / static_cast<long double>(v.size() - ddof)));
}

} // namespace testsupport

#endif
