#ifndef HHT_TESTS_HELPERS_HPP
#define HHT_TESTS_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace hht::testing {

inline std::vector<double> make_tone(std::size_t n, double freq, double amplitude = 1.0,
                                     double phase = 0.0) {
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t)
        out[t] = amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(t) +
                                      phase);
    return out;
}

inline std::vector<double> make_cosine(std::size_t n, double freq, double amplitude = 1.0) {
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t)
        out[t] = amplitude * std::cos(2.0 * std::numbers::pi * freq * static_cast<double>(t));
    return out;
}

// The spec's canonical two-tone test signal.
inline std::vector<double> make_two_tone(std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double x = static_cast<double>(t);
        out[t] = std::sin(2.0 * std::numbers::pi * 0.2 * x) +
                 0.8 * std::sin(2.0 * std::numbers::pi * 0.02 * x);
    }
    return out;
}

inline std::vector<double> make_random_walk(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 1.0);
    std::vector<double> out(n);
    double x = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        x += step(rng);
        out[t] = x;
    }
    return out;
}

inline std::vector<double> add_white_noise(std::span<const double> x, double sigma,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out) v += noise(rng);
    return out;
}

// AR(1) plus a seasonal tone: the synthetic series of the forecast tests.
inline std::vector<double> make_ar_seasonal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, 0.1);
    std::vector<double> out(n);
    double x = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        x = 0.8 * x + eps(rng);
        out[t] = x + 0.5 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0);
    }
    return out;
}

inline double correlation(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

// Correlation over the interior 80% of the two sequences.
inline double interior_correlation(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t trim = n / 10;
    return correlation(a.subspan(trim, n - 2 * trim), b.subspan(trim, n - 2 * trim));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (const double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace hht::testing

#endif
