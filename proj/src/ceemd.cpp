#include "hht/ceemd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "hht/features.hpp"

namespace hht {

namespace {

void check_config(const EnsembleConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("ensemble.trials must be >= 1");
    if (!(config.noise_sigma > 0.0))
        throw std::invalid_argument("ensemble.noise_sigma must be > 0");
    if (config.target_modes < 0)
        throw std::invalid_argument("ensemble.target_modes must be >= 0 (0 = auto)");
}

double sample_std(std::span<const double> x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (const double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double v : x) ss += (v - mean) * (v - mean);
    return n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

// One Gaussian noise vector per trial, from a stream derived from
// (seed, trial) so scheduling can never change a trial's noise.
std::vector<double> trial_noise(std::uint64_t seed, std::uint64_t trial,
                                std::size_t n, double sigma) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      0x9e3779b9u};
    std::mt19937_64 rng(seq);
    std::vector<double> w(n, 0.0);
    if (sigma > 0.0) {
        std::normal_distribution<double> gauss(0.0, sigma);
        for (double& v : w) v = gauss(rng);
    }
    return w;
}

int resolve_target_modes(std::span<const double> signal, const EnsembleConfig& config) {
    if (config.target_modes > 0) return config.target_modes;
    const Decomposition pilot = emd(signal, config.sift);
    return static_cast<int>(pilot.mode_count());
}

// Decompose one noisy signal and fold it into the running sums. Trials are
// capped at target modes, so overflow oscillations stay in the residue and
// the per-trial sum identity is preserved. A target of 0 (pilot found no
// modes) folds everything a trial produces into the residue.
void accumulate_trial(std::span<const double> signal, const SiftConfig& sift_cfg,
                      int target, std::vector<std::vector<double>>& mode_sum,
                      std::vector<double>& residue_sum) {
    SiftConfig capped = sift_cfg;
    if (target > 0) capped.max_modes = target;
    const Decomposition d = emd(signal, capped);
    for (std::size_t j = 0; j < d.imfs.size(); ++j) {
        auto& dest = j < mode_sum.size() ? mode_sum[j] : residue_sum;
        for (std::size_t t = 0; t < signal.size(); ++t) dest[t] += d.imfs[j].values[t];
    }
    for (std::size_t t = 0; t < signal.size(); ++t) residue_sum[t] += d.residue[t];
}

Decomposition finalize(std::vector<std::vector<double>>& mode_sum,
                       std::vector<double>& residue_sum, double inv_count,
                       std::size_t n) {
    Decomposition out;
    out.source_length = n;
    out.imfs.reserve(mode_sum.size());
    for (std::size_t j = 0; j < mode_sum.size(); ++j) {
        for (double& v : mode_sum[j]) v *= inv_count;
        out.imfs.push_back(Imf{std::move(mode_sum[j]), static_cast<int>(j) + 1});
    }
    for (double& v : residue_sum) v *= inv_count;
    out.residue = std::move(residue_sum);
    return out;
}

double correlation(std::span<const double> a, std::span<const double> b) {
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

}  // namespace

Decomposition eemd(std::span<const double> signal, const EnsembleConfig& config) {
    check_config(config);
    if (signal.size() < 8) throw std::invalid_argument("eemd: series too short (need T >= 8)");

    const double sigma = config.noise_sigma * sample_std(signal);
    const int target = resolve_target_modes(signal, config);
    std::vector<std::vector<double>> mode_sum(target, std::vector<double>(signal.size(), 0.0));
    std::vector<double> residue_sum(signal.size(), 0.0);

    std::vector<double> noisy(signal.size());
    for (int i = 0; i < config.trials; ++i) {
        const auto w = trial_noise(config.seed, static_cast<std::uint64_t>(i),
                                   signal.size(), sigma);
        for (std::size_t t = 0; t < signal.size(); ++t) noisy[t] = signal[t] + w[t];
        accumulate_trial(noisy, config.sift, target, mode_sum, residue_sum);
    }
    return finalize(mode_sum, residue_sum, 1.0 / config.trials, signal.size());
}

Decomposition ceemd(std::span<const double> signal, const EnsembleConfig& config) {
    check_config(config);
    if (signal.size() < 8) throw std::invalid_argument("ceemd: series too short (need T >= 8)");

    const double sigma = config.noise_sigma * sample_std(signal);
    const int target = resolve_target_modes(signal, config);
    std::vector<std::vector<double>> mode_sum(target, std::vector<double>(signal.size(), 0.0));
    std::vector<double> residue_sum(signal.size(), 0.0);

    std::vector<double> noisy(signal.size());
    for (int i = 0; i < config.trials; ++i) {
        const auto w = trial_noise(config.seed, static_cast<std::uint64_t>(i),
                                   signal.size(), sigma);
        for (std::size_t t = 0; t < signal.size(); ++t) noisy[t] = signal[t] + w[t];
        accumulate_trial(noisy, config.sift, target, mode_sum, residue_sum);
        for (std::size_t t = 0; t < signal.size(); ++t) noisy[t] = signal[t] - w[t];
        accumulate_trial(noisy, config.sift, target, mode_sum, residue_sum);
    }
    return finalize(mode_sum, residue_sum, 0.5 / config.trials, signal.size());
}

Decomposition eemd(const TimeSeries& series, const EnsembleConfig& config) {
    return eemd(std::span<const double>(series.values), config);
}

Decomposition ceemd(const TimeSeries& series, const EnsembleConfig& config) {
    return ceemd(std::span<const double>(series.values), config);
}

EndEffectErrorReport characterize_end_effect(
    const std::vector<std::vector<double>>& truth_modes,
    const EnsembleConfig& config, int replications) {
    if (truth_modes.empty()) throw std::invalid_argument("characterize_end_effect: no truth modes");
    if (replications < 1) throw std::invalid_argument("characterize_end_effect: replications >= 1");
    const std::size_t n = truth_modes.front().size();
    for (const auto& m : truth_modes)
        if (m.size() != n)
            throw std::invalid_argument("characterize_end_effect: truth mode length mismatch");

    std::vector<double> input(n, 0.0);
    for (const auto& m : truth_modes)
        for (std::size_t t = 0; t < n; ++t) input[t] += m[t];

    const std::size_t k = truth_modes.size();
    constexpr std::size_t kBins = 10;
    EndEffectErrorReport report;
    report.replications = replications;
    report.lambda_bin_edges.resize(kBins + 1);
    for (std::size_t b = 0; b <= kBins; ++b)
        report.lambda_bin_edges[b] = static_cast<double>(b) / kBins;
    report.rmse.assign(k + 1, std::vector<double>(kBins, 0.0));
    std::vector<std::vector<double>> sumsq(k + 1, std::vector<double>(kBins, 0.0));
    std::vector<std::size_t> counts(kBins, 0);

    // Per-sample bin by |lambda| decile over the full decomposition span.
    std::vector<std::size_t> bin_of(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double lam = std::abs(end_effect_factor(static_cast<double>(t), 0.0,
                                                      static_cast<double>(n - 1)));
        bin_of[t] = std::min<std::size_t>(kBins - 1,
                                          static_cast<std::size_t>(lam * kBins));
    }

    EnsembleConfig rep_cfg = config;
    rep_cfg.target_modes = static_cast<int>(k);
    for (int rep = 0; rep < replications; ++rep) {
        rep_cfg.seed = config.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(rep + 1);
        const Decomposition d = ceemd(input, rep_cfg);
        if (d.mode_count() != k)
            throw std::runtime_error("characterize_end_effect: mode count mismatch");

        // Match decomposed modes to truth components by best |correlation|.
        std::vector<int> assignment(k, -1);
        std::vector<bool> used(k, false);
        for (std::size_t j = 0; j < k; ++j) {
            double best = -1.0;
            int best_mode = -1;
            for (std::size_t m = 0; m < k; ++m) {
                if (used[m]) continue;
                const double c = std::abs(correlation(truth_modes[j], d.imfs[m].values));
                if (c > best) {
                    best = c;
                    best_mode = static_cast<int>(m);
                }
            }
            assignment[j] = best_mode;
            used[static_cast<std::size_t>(best_mode)] = true;
        }

        for (std::size_t t = 0; t < n; ++t) {
            double err_sum = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double e =
                    d.imfs[static_cast<std::size_t>(assignment[j])].values[t] - truth_modes[j][t];
                sumsq[j][bin_of[t]] += e * e;
                err_sum += e;
            }
            const double e_res = d.residue[t];  // truth residue is identically zero
            sumsq[k][bin_of[t]] += e_res * e_res;
            err_sum += e_res;
            report.max_abs_error_sum = std::max(report.max_abs_error_sum, std::abs(err_sum));
            if (rep == 0) ++counts[bin_of[t]];
        }
    }

    for (std::size_t row = 0; row <= k; ++row)
        for (std::size_t b = 0; b < kBins; ++b)
            if (counts[b] > 0)
                report.rmse[row][b] = std::sqrt(
                    sumsq[row][b] / (static_cast<double>(counts[b]) * replications));
    return report;
}

void save_csv(const EndEffectErrorReport& report, const std::string& path,
              const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "mode,bin_low,bin_high,rmse\n";
    const std::size_t rows = report.rmse.size();
    for (std::size_t row = 0; row < rows; ++row) {
        for (std::size_t b = 0; b + 1 < report.lambda_bin_edges.size(); ++b) {
            if (row + 1 < rows)
                out << (row + 1);
            else
                out << "residue";
            out << "," << format_double(report.lambda_bin_edges[b]) << ","
                << format_double(report.lambda_bin_edges[b + 1]) << ","
                << format_double(report.rmse[row][b]) << "\n";
        }
    }
}

}  // namespace hht
