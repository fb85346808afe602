#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "hht/features.hpp"

using namespace hht;
using namespace hht::testing;

namespace {

// One decomposition + analytic modes reused across cases.
struct Fixture {
    TimeSeries series;
    Decomposition decomp;
    std::vector<AnalyticMode> modes;

    explicit Fixture(std::size_t n = 400) {
        series.values = make_two_tone(n);
        EnsembleConfig cfg;
        cfg.trials = 2;
        cfg.seed = 77;
        decomp = ceemd(series, cfg);
        for (const auto& imf : decomp.imfs) modes.push_back(analytic_mode(imf));
    }
};

}  // namespace

TEST_CASE("end_effect_factor endpoints and midpoint") {
    CHECK(end_effect_factor(5.0, 0.0, 10.0) == 0.0);    // middle -> 0
    CHECK(end_effect_factor(10.0, 0.0, 10.0) == 1.0);   // end -> +1
    CHECK(end_effect_factor(0.0, 0.0, 10.0) == -1.0);   // start -> -1
    CHECK(end_effect_factor(7.5, 0.0, 10.0) == 0.5);
    CHECK_THROWS_AS(end_effect_factor(11.0, 0.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(end_effect_factor(1.0, 5.0, 5.0), std::invalid_argument);
}

TEST_CASE("end_effect_factor stays within [-1, 1] across an interval") {
    for (int t = 17; t <= 217; ++t) {
        const double lam = end_effect_factor(t, 17.0, 217.0);
        CHECK(lam >= -1.0);
        CHECK(lam <= 1.0);
    }
}

TEST_CASE("build_features: minimal selector yields [c_1(t)]") {
    Fixture fx;
    FeatureSetSelector sel;
    sel.include_imf = true;
    sel.include_hilbert = false;
    sel.subset = ModeSubset::FirstK;
    sel.k = 1;
    const auto v = build_features(fx.decomp, fx.modes, 100, 1, sel);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == fx.decomp.imfs[0].values[100]);
}

TEST_CASE("build_features: full layout length arithmetic") {
    Fixture fx;
    const std::size_t n_modes = fx.decomp.mode_count();
    FeatureSetSelector sel;
    sel.include_imf = sel.include_hilbert = sel.include_amplitude = sel.include_frequency = true;
    sel.include_lambda = true;
    const std::size_t tau = 5;
    const auto v = build_features(fx.decomp, fx.modes, 100, tau, sel);
    CHECK(v.size() == 4 * n_modes * tau + 1);
    CHECK(feature_column_names(n_modes, tau, sel).size() == v.size());
}

TEST_CASE("build_features layout order: mode-major, kind order c/ch/a/f, oldest lag first") {
    Fixture fx;
    FeatureSetSelector sel;
    sel.include_imf = sel.include_hilbert = true;
    const std::size_t tau = 3, t = 50;
    const auto v = build_features(fx.decomp, fx.modes, t, tau, sel);
    CHECK(v[0] == fx.decomp.imfs[0].values[t - 2]);
    CHECK(v[1] == fx.decomp.imfs[0].values[t - 1]);
    CHECK(v[2] == fx.decomp.imfs[0].values[t]);
    CHECK(v[3] == fx.modes[0].imag_part[t - 2]);
    CHECK(v[5] == fx.modes[0].imag_part[t]);
    CHECK(v[6] == fx.decomp.imfs[1].values[t - 2]);

    const auto names = feature_column_names(fx.decomp.mode_count(), tau, sel);
    CHECK(names[0] == "c1_lag2");
    CHECK(names[2] == "c1_lag0");
    CHECK(names[3] == "ch1_lag2");
    CHECK(names[6] == "c2_lag2");
}

TEST_CASE("build_features validates its window and selector") {
    Fixture fx;
    FeatureSetSelector sel;
    CHECK_THROWS_AS(build_features(fx.decomp, fx.modes, 2, 5, sel), std::invalid_argument);
    CHECK_THROWS_AS(build_features(fx.decomp, fx.modes, 1000, 5, sel), std::invalid_argument);
    FeatureSetSelector none;
    none.include_imf = none.include_hilbert = false;
    CHECK_THROWS_AS(build_features(fx.decomp, fx.modes, 50, 5, none), std::invalid_argument);
    FeatureSetSelector bad_k;
    bad_k.subset = ModeSubset::FirstK;
    bad_k.k = 99;
    CHECK_THROWS_AS(build_features(fx.decomp, fx.modes, 50, 5, bad_k), std::invalid_argument);
}

TEST_CASE("last-k mode subset picks the slowest modes") {
    Fixture fx;
    REQUIRE(fx.decomp.mode_count() >= 2);
    FeatureSetSelector sel;
    sel.include_hilbert = false;
    sel.subset = ModeSubset::LastK;
    sel.k = 1;
    const auto v = build_features(fx.decomp, fx.modes, 50, 1, sel);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == fx.decomp.imfs.back().values[50]);
}

TEST_CASE("dataset rows reproduce pointwise build_features bit-identically") {
    Fixture fx;
    FeatureSetSelector sel;
    sel.include_lambda = true;
    const std::size_t tau = 4;
    const auto ds = build_dataset_from(fx.decomp, fx.modes, fx.series.values, 10, 60, tau, sel);
    REQUIRE(ds.row_count() == 51);
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        CHECK(ds.rows[r] == build_features(fx.decomp, fx.modes, ds.t_index[r], tau, sel));
        CHECK(ds.targets[r] == fx.series.values[ds.t_index[r] + 1] -
                                   fx.series.values[ds.t_index[r]]);
    }
}

TEST_CASE("build_dataset over a constant series has all-zero targets") {
    TimeSeries s;
    s.values.assign(64, 2.5);
    EnsembleConfig cfg;
    cfg.trials = 2;
    cfg.seed = 1;
    FeatureSetSelector sel;
    sel.include_lambda = true;
    const auto ds = build_dataset(s, 4, 62, 5, sel, cfg, LowessConfig{});
    for (const double t : ds.targets) CHECK(t == 0.0);
}

TEST_CASE("feature rows depend only on samples at or before t") {
    // With the decomposition window ending at t, mutating later raw samples
    // must leave the feature vector bit-identical.
    const std::size_t t_end = 299;
    auto values = make_two_tone(400);
    FeatureSetSelector sel;
    sel.include_lambda = true;
    EnsembleConfig cfg;
    cfg.trials = 2;
    cfg.seed = 5;

    const std::span<const double> head(values.data(), t_end + 1);
    const Decomposition d1 = ceemd(head, cfg);
    std::vector<AnalyticMode> m1;
    for (const auto& imf : d1.imfs) m1.push_back(analytic_mode(imf));
    const auto before = build_features(d1, m1, t_end, 5, sel);

    for (std::size_t s = t_end + 1; s < values.size(); ++s) values[s] = 1e6;
    const std::span<const double> head2(values.data(), t_end + 1);
    const Decomposition d2 = ceemd(head2, cfg);
    std::vector<AnalyticMode> m2;
    for (const auto& imf : d2.imfs) m2.push_back(analytic_mode(imf));
    const auto after = build_features(d2, m2, t_end, 5, sel);

    CHECK(before == after);
}

TEST_CASE("standardization: zero-variance columns keep scale 1") {
    TimeSeries s;
    s.values.assign(64, 1.0);
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.values[i] += 0.001 * static_cast<double>(i);
    const auto ds = build_lag_dataset(s.values, 4, 62, 3);
    REQUIRE(ds.col_scale.size() == 3);
    for (const double sc : ds.col_scale) CHECK(sc > 0.0);

    TimeSeries flat;
    flat.values.assign(32, 7.0);
    const auto ds_flat = build_lag_dataset(flat.values, 2, 30, 2);
    for (const double sc : ds_flat.col_scale) CHECK(sc == 1.0);
    for (const double mu : ds_flat.col_mean) CHECK(mu == 7.0);
}
