#ifndef HHT_HSA_HPP
#define HHT_HSA_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hht/emd.hpp"

namespace hht {

struct LowessConfig {
    double span = 0.05;        // fraction of samples per local window
    int robust_iterations = 5; // bisquare reweighting rounds
};

/// One IMF lifted to its analytic signal: c + i*H[c] = a * exp(i*theta),
/// with the instantaneous frequency f = dtheta/dt / (2*pi) in cycles per
/// sample (LOWESS-smoothed, never clamped).
struct AnalyticMode {
    std::vector<double> real_part;
    std::vector<double> imag_part;
    std::vector<double> amplitude;
    std::vector<double> phase;      // unwrapped radians
    std::vector<double> frequency;  // cycles per sample
    int mode_index = 0;
};

struct SpectrumPoint {
    int mode_index;
    std::size_t time;
    double frequency;
    double energy;     // a(t)^2
    double amplitude;
};

struct ModeSummary {
    int mode_index;
    double mean_frequency;
    double mean_energy;
};

/// Discrete Hilbert transform via the analytic-signal spectral method:
/// zero the negative-frequency half, double the positive half (DC and
/// Nyquist pass unscaled), inverse transform; the imaginary part is H[x].
std::vector<double> hilbert(std::span<const double> signal);

/// Unwrap raw atan2 phases by adding +-2*pi at jumps larger than pi.
std::vector<double> unwrap_phase(std::span<const double> raw_phase);

/// Robust LOWESS (Cleveland): locally weighted linear regression with
/// tricube distance weights plus bisquare residual reweighting rounds.
/// Reproduces degree-<=1 polynomials exactly.
std::vector<double> robust_lowess(std::span<const double> y, const LowessConfig& config = {});

/// Centered finite difference of the unwrapped phase over 2*pi (one-sided
/// at the ends), then LOWESS smoothing. Sequences too short for the span
/// window (< 2 points) are returned unsmoothed.
std::vector<double> instantaneous_frequency(std::span<const double> unwrapped_phase,
                                            const LowessConfig& config = {});

AnalyticMode analytic_mode(const Imf& imf, const LowessConfig& config = {});

/// Sparse support of the Hilbert spectrum H(f,t): one point per (mode, t).
std::vector<SpectrumPoint> hilbert_spectrum(const Decomposition& decomp,
                                            const LowessConfig& config = {});

/// Per-mode arithmetic means of frequency and energy over the interior 80%
/// of samples (end-effect trim).
std::vector<ModeSummary> mode_spectrum_means(const std::vector<SpectrumPoint>& points);

/// CSV with columns mode, t, frequency, energy, amplitude.
void save_csv(const std::vector<SpectrumPoint>& points, const std::string& path,
              const std::string& header_comment = "");
void save_csv(const std::vector<ModeSummary>& means, const std::string& path,
              const std::string& header_comment = "");

/// [first, last) index range covering the interior `fraction` of n samples.
std::pair<std::size_t, std::size_t> interior_range(std::size_t n, double fraction = 0.8);

}  // namespace hht

#endif
