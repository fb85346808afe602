#ifndef HHT_FEATURES_HPP
#define HHT_FEATURES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hht/ceemd.hpp"
#include "hht/hsa.hpp"

namespace hht {

enum class ModeSubset { All, FirstK, LastK };

/// Which HHT feature kinds and which modes go into a feature vector.
/// At least one include flag must be set; k is required for FirstK/LastK.
struct FeatureSetSelector {
    bool include_imf = true;        // c_j
    bool include_hilbert = true;    // H[c_j]
    bool include_amplitude = false; // a_j
    bool include_frequency = false; // f_j
    bool include_lambda = false;    // end-effect factor, one scalar per row
    ModeSubset subset = ModeSubset::All;
    int k = 0;
};

/// Supervised rows: at each time t the concatenated lagged HHT features,
/// aligned with the next-step target x(t+1) - x(t). Standardization
/// parameters are fitted on these rows and stored; they are applied at
/// fit/predict time and never recomputed on unseen data.
struct FeatureMatrix {
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    std::vector<std::size_t> t_index;  // feature time of each row
    std::size_t tau = 0;
    std::vector<std::string> column_names;
    std::vector<double> col_mean;
    std::vector<double> col_scale;  // 1.0 for zero-variance columns

    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return column_names.size(); }
};

/// lambda = (2t - (T1+T2)) / (T2 - T1): the position of t on [T1, T2],
/// -1/0/+1 at the start/midpoint/end.
double end_effect_factor(double t, double interval_start, double interval_end);

/// 1-based mode indices picked by the selector for an n-mode decomposition.
std::vector<int> selected_modes(const FeatureSetSelector& selector, std::size_t n_modes);

/// One feature vector at time t: for each selected mode ascending, for each
/// selected kind in the fixed order (c, H[c], a, f), the tau lagged values
/// oldest-first; lambda appended last when included. Depends only on
/// samples at indices <= t of the decomposed window.
std::vector<double> build_features(const Decomposition& decomp,
                                   const std::vector<AnalyticMode>& modes,
                                   std::size_t t, std::size_t tau,
                                   const FeatureSetSelector& selector);

/// Column names matching build_features' layout (c1_lag4 ... lambda).
std::vector<std::string> feature_column_names(std::size_t n_modes, std::size_t tau,
                                              const FeatureSetSelector& selector);

/// Rows for t in [t_first, t_last] over an existing decomposition.
FeatureMatrix build_dataset_from(const Decomposition& decomp,
                                 const std::vector<AnalyticMode>& modes,
                                 std::span<const double> values,
                                 std::size_t t_first, std::size_t t_last,
                                 std::size_t tau, const FeatureSetSelector& selector);

/// Decompose the series once (CEEMD + HSA), then build rows for t in
/// [t_first, t_last]; targets are x(t+1) - x(t).
FeatureMatrix build_dataset(const TimeSeries& series, std::size_t t_first,
                            std::size_t t_last, std::size_t tau,
                            const FeatureSetSelector& selector,
                            const EnsembleConfig& ensemble,
                            const LowessConfig& lowess);

/// Plain lagged-value benchmark rows (x(t-tau+1..t) -> target), no HHT.
FeatureMatrix build_lag_dataset(std::span<const double> values, std::size_t t_first,
                                std::size_t t_last, std::size_t tau);

/// CSV with one named column per feature plus target.
void save_csv(const FeatureMatrix& matrix, const std::string& path,
              const std::string& header_comment = "");

}  // namespace hht

#endif
