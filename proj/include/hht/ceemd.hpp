#ifndef HHT_CEEMD_HPP
#define HHT_CEEMD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hht/emd.hpp"

namespace hht {

/// Noise-assisted ensemble controls. noise_sigma scales the added white
/// noise relative to the input's sample standard deviation. target_modes
/// fixes the mode count across trials so ensemble averaging stays
/// index-aligned; 0 lets a pilot plain-EMD run on the input decide.
struct EnsembleConfig {
    int trials = 100;  // N; CEEMD runs 2N signals (paired +/- noise)
    double noise_sigma = 0.2;
    std::uint64_t seed = 0;
    SiftConfig sift{};
    int target_modes = 0;
};

/// Ensemble EMD: average of per-trial decompositions of x + w_i. The
/// residual noise term decays as O(1/sqrt(N)).
Decomposition eemd(std::span<const double> signal, const EnsembleConfig& config);
Decomposition eemd(const TimeSeries& series, const EnsembleConfig& config);

/// Complementary EEMD: 2N trials on paired signals x + w_i and x - w_i with
/// the same noise realization per pair. The paired noise cancels exactly in
/// the ensemble mean, so sum(modes) + residue == x for every N.
Decomposition ceemd(std::span<const double> signal, const EnsembleConfig& config);
Decomposition ceemd(const TimeSeries& series, const EnsembleConfig& config);

/// Empirical characterization of the boundary error. RMSE of the per-sample
/// decomposition error, binned by |lambda| decile; rows are the truth modes
/// in order plus one final row for the residue error.
struct EndEffectErrorReport {
    std::vector<double> lambda_bin_edges;        // 0.0, 0.1, ..., 1.0
    std::vector<std::vector<double>> rmse;       // (modes + residue) x 10
    double max_abs_error_sum = 0.0;              // max_t |1^T E(t)| over all reps
    int replications = 0;
};

/// Decompose sum(truth_modes) `replications` times with distinct seeds and
/// bin the per-mode error RMSE by |lambda| decile. Decomposed modes are
/// matched to truth components by best absolute correlation.
EndEffectErrorReport characterize_end_effect(
    const std::vector<std::vector<double>>& truth_modes,
    const EnsembleConfig& config, int replications);

/// CSV with columns mode, bin_low, bin_high, rmse. The residue row is
/// labelled "residue".
void save_csv(const EndEffectErrorReport& report, const std::string& path,
              const std::string& header_comment = "");

}  // namespace hht

#endif
