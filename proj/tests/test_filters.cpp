#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "hht/ceemd.hpp"
#include "hht/filters.hpp"

using namespace hht;
using namespace hht::testing;

namespace {

double variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("low_pass with m = 1 is the full reconstruction") {
    const auto x = make_random_walk(256, 2);
    EnsembleConfig cfg;
    cfg.trials = 4;
    cfg.seed = 9;
    const Decomposition d = ceemd(x, cfg);
    CHECK(max_abs_diff(low_pass(d, 1), x) < 1e-8 * max_abs(x));
}

TEST_CASE("cutoff out of range is rejected") {
    const auto x = make_random_walk(256, 2);
    const Decomposition d = emd(x);
    const int n = static_cast<int>(d.mode_count());
    CHECK_THROWS_AS(low_pass(d, n + 1), std::invalid_argument);
    CHECK_THROWS_AS(low_pass(d, 0), std::invalid_argument);
    CHECK_THROWS_AS(high_pass(d, n + 1), std::invalid_argument);
}

TEST_CASE("high_pass(m) + low_pass(m+1) partitions the input") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = make_random_walk(256, seed);
        const Decomposition d = emd(x);
        if (d.mode_count() < 2) continue;
        for (int m = 1; m + 1 <= static_cast<int>(d.mode_count()); ++m) {
            const auto hp = high_pass(d, m);
            const auto lp = low_pass(d, m + 1);
            std::vector<double> sum(x.size());
            for (std::size_t t = 0; t < x.size(); ++t) sum[t] = hp[t] + lp[t];
            CHECK(max_abs_diff(sum, x) < 1e-8 * max_abs(x));
        }
    }
}

TEST_CASE("high_pass with m = n is the input minus the residue") {
    const auto x = make_random_walk(300, 8);
    const Decomposition d = emd(x);
    const auto hp = high_pass(d, static_cast<int>(d.mode_count()));
    for (std::size_t t = 0; t < x.size(); ++t)
        CHECK(hp[t] == doctest::Approx(x[t] - d.residue[t]).epsilon(1e-10));
}

TEST_CASE("filters isolate the expected components of a two-tone plus ramp") {
    const std::size_t n = 1000;
    std::vector<double> x(n), slow_plus_ramp(n);
    const auto fast = make_tone(n, 0.2);
    const auto slow = make_tone(n, 0.02, 0.8);
    for (std::size_t t = 0; t < n; ++t) {
        const double ramp = 0.002 * static_cast<double>(t);
        x[t] = fast[t] + slow[t] + ramp;
        slow_plus_ramp[t] = slow[t] + ramp;
    }
    const Decomposition d = emd(x);
    REQUIRE(d.mode_count() >= 2);
    CHECK(interior_correlation(low_pass(d, 2), slow_plus_ramp) >= 0.95);
    CHECK(interior_correlation(high_pass(d, 1), fast) >= 0.95);
}

TEST_CASE("low_pass variance is nonincreasing in the cutoff on broadband input") {
    // White noise is the broadband case; a random walk concentrates its
    // power at low frequencies and the property does not hold there.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto x = add_white_noise(std::vector<double>(512, 0.0), 1.0, seed);
        const Decomposition d = emd(x);
        REQUIRE(d.mode_count() >= 3);
        double prev = variance(low_pass(d, 1));
        for (int m = 2; m <= static_cast<int>(d.mode_count()); ++m) {
            const double cur = variance(low_pass(d, m));
            CHECK(cur <= prev * (1.0 + 1e-9));
            prev = cur;
        }
    }
}
