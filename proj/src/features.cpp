#include "hht/features.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hht {

namespace {

void check_selector(const FeatureSetSelector& sel, std::size_t n_modes) {
    if (!sel.include_imf && !sel.include_hilbert && !sel.include_amplitude &&
        !sel.include_frequency && !sel.include_lambda)
        throw std::invalid_argument("feature selector: no feature kind selected");
    if (sel.subset != ModeSubset::All &&
        (sel.k < 1 || static_cast<std::size_t>(sel.k) > n_modes))
        throw std::invalid_argument("feature selector: k out of range [1, " +
                                    std::to_string(n_modes) + "]");
}

// The per-mode kinds in their fixed layout order.
struct KindSpec {
    const char* tag;
    bool selected;
};

void standardize_fit(FeatureMatrix& m) {
    const std::size_t p = m.col_count();
    m.col_mean.assign(p, 0.0);
    m.col_scale.assign(p, 1.0);
    const std::size_t n = m.row_count();
    if (n == 0) return;
    for (const auto& row : m.rows)
        for (std::size_t j = 0; j < p; ++j) m.col_mean[j] += row[j];
    for (std::size_t j = 0; j < p; ++j) m.col_mean[j] /= static_cast<double>(n);
    if (n < 2) return;
    for (std::size_t j = 0; j < p; ++j) {
        double ss = 0.0;
        for (const auto& row : m.rows) {
            const double d = row[j] - m.col_mean[j];
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd > 0.0) m.col_scale[j] = sd;  // zero-variance columns stay unscaled
    }
}

}  // namespace

double end_effect_factor(double t, double interval_start, double interval_end) {
    if (!(interval_start < interval_end))
        throw std::invalid_argument("end_effect_factor: degenerate interval");
    if (t < interval_start || t > interval_end)
        throw std::invalid_argument("end_effect_factor: t outside interval");
    return (2.0 * t - (interval_start + interval_end)) / (interval_end - interval_start);
}

std::vector<int> selected_modes(const FeatureSetSelector& selector, std::size_t n_modes) {
    check_selector(selector, n_modes);
    std::vector<int> modes;
    switch (selector.subset) {
        case ModeSubset::All:
            for (std::size_t j = 1; j <= n_modes; ++j) modes.push_back(static_cast<int>(j));
            break;
        case ModeSubset::FirstK:
            for (int j = 1; j <= selector.k; ++j) modes.push_back(j);
            break;
        case ModeSubset::LastK:
            for (std::size_t j = n_modes - static_cast<std::size_t>(selector.k) + 1;
                 j <= n_modes; ++j)
                modes.push_back(static_cast<int>(j));
            break;
    }
    return modes;
}

std::vector<double> build_features(const Decomposition& decomp,
                                   const std::vector<AnalyticMode>& modes,
                                   std::size_t t, std::size_t tau,
                                   const FeatureSetSelector& selector) {
    if (modes.size() != decomp.mode_count())
        throw std::invalid_argument("build_features: analytic modes do not match decomposition");
    const std::size_t n = decomp.source_length;
    if (tau == 0 || t >= n || t + 1 < tau)
        throw std::invalid_argument("build_features: window out of range");

    const auto mode_ids = selected_modes(selector, decomp.mode_count());
    std::vector<double> out;
    for (const int j : mode_ids) {
        const auto& imf = decomp.imfs[static_cast<std::size_t>(j) - 1];
        const auto& am = modes[static_cast<std::size_t>(j) - 1];
        const std::span<const double> kinds[4] = {imf.values, am.imag_part, am.amplitude,
                                                  am.frequency};
        const bool selected[4] = {selector.include_imf, selector.include_hilbert,
                                  selector.include_amplitude, selector.include_frequency};
        for (int kind = 0; kind < 4; ++kind) {
            if (!selected[kind]) continue;
            for (std::size_t s = t + 1 - tau; s <= t; ++s) out.push_back(kinds[kind][s]);
        }
    }
    if (selector.include_lambda)
        out.push_back(end_effect_factor(static_cast<double>(t), 0.0,
                                        static_cast<double>(n - 1)));
    return out;
}

std::vector<std::string> feature_column_names(std::size_t n_modes, std::size_t tau,
                                              const FeatureSetSelector& selector) {
    const auto mode_ids = selected_modes(selector, n_modes);
    std::vector<std::string> names;
    for (const int j : mode_ids) {
        const KindSpec kinds[4] = {{"c", selector.include_imf},
                                   {"ch", selector.include_hilbert},
                                   {"a", selector.include_amplitude},
                                   {"f", selector.include_frequency}};
        for (const auto& kind : kinds) {
            if (!kind.selected) continue;
            for (std::size_t lag = tau; lag-- > 0;)
                names.push_back(std::string(kind.tag) + std::to_string(j) + "_lag" +
                                std::to_string(lag));
        }
    }
    if (selector.include_lambda) names.emplace_back("lambda");
    return names;
}

FeatureMatrix build_dataset_from(const Decomposition& decomp,
                                 const std::vector<AnalyticMode>& modes,
                                 std::span<const double> values,
                                 std::size_t t_first, std::size_t t_last,
                                 std::size_t tau, const FeatureSetSelector& selector) {
    if (t_first > t_last) throw std::invalid_argument("build_dataset: empty row range");
    if (tau == 0 || t_first + 1 < tau)
        throw std::invalid_argument("build_dataset: insufficient history for tau");
    if (t_last + 1 >= values.size())
        throw std::invalid_argument("build_dataset: no target available for last row");

    FeatureMatrix m;
    m.tau = tau;
    m.column_names = feature_column_names(decomp.mode_count(), tau, selector);
    for (std::size_t t = t_first; t <= t_last; ++t) {
        m.rows.push_back(build_features(decomp, modes, t, tau, selector));
        m.targets.push_back(values[t + 1] - values[t]);
        m.t_index.push_back(t);
    }
    standardize_fit(m);
    return m;
}

FeatureMatrix build_dataset(const TimeSeries& series, std::size_t t_first,
                            std::size_t t_last, std::size_t tau,
                            const FeatureSetSelector& selector,
                            const EnsembleConfig& ensemble,
                            const LowessConfig& lowess) {
    const Decomposition decomp = ceemd(series, ensemble);
    std::vector<AnalyticMode> modes;
    modes.reserve(decomp.mode_count());
    for (const auto& imf : decomp.imfs) modes.push_back(analytic_mode(imf, lowess));
    return build_dataset_from(decomp, modes, series.values, t_first, t_last, tau, selector);
}

FeatureMatrix build_lag_dataset(std::span<const double> values, std::size_t t_first,
                                std::size_t t_last, std::size_t tau) {
    if (t_first > t_last) throw std::invalid_argument("build_lag_dataset: empty row range");
    if (tau == 0 || t_first + 1 < tau)
        throw std::invalid_argument("build_lag_dataset: insufficient history for tau");
    if (t_last + 1 >= values.size())
        throw std::invalid_argument("build_lag_dataset: no target available for last row");

    FeatureMatrix m;
    m.tau = tau;
    for (std::size_t lag = tau; lag-- > 0;)
        m.column_names.push_back("x_lag" + std::to_string(lag));
    for (std::size_t t = t_first; t <= t_last; ++t) {
        m.rows.push_back(window(values, t, tau));
        m.targets.push_back(values[t + 1] - values[t]);
        m.t_index.push_back(t);
    }
    standardize_fit(m);
    return m;
}

void save_csv(const FeatureMatrix& matrix, const std::string& path,
              const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "t";
    for (const auto& name : matrix.column_names) out << "," << name;
    out << ",target\n";
    for (std::size_t r = 0; r < matrix.row_count(); ++r) {
        out << (matrix.t_index[r] + 1);
        for (const double v : matrix.rows[r]) out << "," << format_double(v);
        out << "," << format_double(matrix.targets[r]) << "\n";
    }
}

}  // namespace hht
