#ifndef HHT_EMD_HPP
#define HHT_EMD_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hht/time_series.hpp"

namespace hht {

/// Sifting controls. The SD rule is the Cauchy-type criterion of Huang 1998:
/// stop once sum((c_prev - c_new)^2) / sum(c_prev^2) < sd_threshold and the
/// extrema/zero-crossing counts differ by at most one.
struct SiftConfig {
    double sd_threshold = 0.2;
    int max_sift_iterations = 100;
    int max_modes = 0;  // 0 = unlimited
};

struct Imf {
    std::vector<double> values;
    int mode_index = 0;  // 1-based, highest frequency first
};

struct Decomposition {
    std::vector<Imf> imfs;
    std::vector<double> residue;
    std::size_t source_length = 0;

    std::size_t mode_count() const { return imfs.size(); }
    /// Sum of all IMFs plus the residue.
    std::vector<double> reconstruct() const;
};

struct ExtremaSet {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

/// Strict interior local extrema, 0-based indices in increasing order.
/// A plateau contributes its floor-midpoint index once.
ExtremaSet find_extrema(std::span<const double> signal);

/// Count of sign changes, ignoring exact zeros.
std::size_t zero_crossings(std::span<const double> signal);

/// True iff the signal has at most one interior extremum.
bool is_residue(std::span<const double> signal);

/// Mean of the upper and lower natural-cubic-spline envelopes. The two
/// extrema nearest each end are mirrored across the endpoint to anchor the
/// splines beyond the time span. Requires >= 2 maxima and >= 2 minima.
std::vector<double> envelope_mean(std::span<const double> signal);

/// Extract one IMF candidate by repeated envelope-mean subtraction.
/// Requires the signal to still be oscillatory (not a residue); if the
/// extrema vanish mid-sift the current iterate is returned as final.
Imf sift(std::span<const double> signal, const SiftConfig& config = {});

/// Full empirical mode decomposition: IMFs are extracted until the remainder
/// is a residue (<= 1 interior extremum, or too few extrema to envelope).
/// The identity sum(imfs) + residue == input holds to roundoff.
Decomposition emd(std::span<const double> signal, const SiftConfig& config = {});
Decomposition emd(const TimeSeries& series, const SiftConfig& config = {});

/// CSV with columns t, imf_1..imf_n, residue; one row per sample.
void save_csv(const Decomposition& decomp, const std::string& path,
              const std::string& header_comment = "");

}  // namespace hht

#endif
