#include "hht/hsa.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hht {

namespace {

// FFTW's planner is not thread-safe; plan creation/destruction is guarded.
// FFTW_ESTIMATE keeps planning deterministic (no runtime measurement).
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

std::vector<double> hilbert(std::span<const double> signal) {
    const std::size_t n = signal.size();
    if (n < 4) throw std::invalid_argument("hilbert: signal too short (need >= 4)");

    fftw_complex* buf = fftw_alloc_complex(n);
    fftw_complex* spec = fftw_alloc_complex(n);
    for (std::size_t t = 0; t < n; ++t) {
        buf[t][0] = signal[t];
        buf[t][1] = 0.0;
    }

    fftw_plan fwd, inv;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, spec, FFTW_FORWARD, FFTW_ESTIMATE);
        inv = fftw_plan_dft_1d(static_cast<int>(n), spec, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);

    // Analytic-signal spectrum: DC (and Nyquist for even n) unscaled,
    // positive frequencies doubled, negative frequencies zeroed.
    const std::size_t pos_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;  // exclusive
    for (std::size_t k = 1; k < pos_end; ++k) {
        spec[k][0] *= 2.0;
        spec[k][1] *= 2.0;
    }
    for (std::size_t k = (n % 2 == 0) ? n / 2 + 1 : pos_end; k < n; ++k) {
        spec[k][0] = 0.0;
        spec[k][1] = 0.0;
    }

    fftw_execute(inv);
    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = buf[t][1] * scale;

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    fftw_free(buf);
    fftw_free(spec);
    return out;
}

std::vector<double> unwrap_phase(std::span<const double> raw_phase) {
    std::vector<double> out(raw_phase.size());
    if (raw_phase.empty()) return out;
    out[0] = raw_phase[0];
    double offset = 0.0;
    for (std::size_t t = 1; t < raw_phase.size(); ++t) {
        const double d = raw_phase[t] - raw_phase[t - 1];
        if (d > kPi)
            offset -= 2.0 * kPi;
        else if (d <= -kPi)
            offset += 2.0 * kPi;
        out[t] = raw_phase[t] + offset;
    }
    return out;
}

std::vector<double> robust_lowess(std::span<const double> y, const LowessConfig& config) {
    const std::size_t n = y.size();
    if (!(config.span > 0.0) || config.span > 1.0)
        throw std::invalid_argument("lowess.span must lie in (0, 1]");
    if (config.robust_iterations < 0)
        throw std::invalid_argument("lowess.robust_iterations must be >= 0");
    if (n < 4) throw std::invalid_argument("robust_lowess: sequence too short");
    const std::size_t k =
        static_cast<std::size_t>(std::ceil(config.span * static_cast<double>(n)));
    if (k < 2) throw std::invalid_argument("robust_lowess: span window smaller than 2 points");

    std::vector<double> fitted(n, 0.0);
    std::vector<double> robustness(n, 1.0);

    for (int iter = 0; iter <= config.robust_iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t start = i >= (k - 1) / 2 ? i - (k - 1) / 2 : 0;
            start = std::min(start, n - k);
            const std::size_t end = start + k;  // exclusive
            const double dmax = static_cast<double>(
                std::max(i - start, end - 1 - i));

            double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
            for (std::size_t j = start; j < end; ++j) {
                const double d = std::abs(static_cast<double>(j) - static_cast<double>(i)) / dmax;
                const double tri = 1.0 - d * d * d;
                double w = tri * tri * tri * robustness[j];
                if (w <= 0.0) continue;
                const double x = static_cast<double>(j);
                sw += w;
                swx += w * x;
                swy += w * y[j];
                swxx += w * x * x;
                swxy += w * x * y[j];
            }
            if (sw <= 0.0) {  // every neighbor rejected; fall back to tricube only
                for (std::size_t j = start; j < end; ++j) {
                    const double d =
                        std::abs(static_cast<double>(j) - static_cast<double>(i)) / dmax;
                    const double tri = 1.0 - d * d * d;
                    const double w = tri * tri * tri;
                    const double x = static_cast<double>(j);
                    sw += w;
                    swx += w * x;
                    swy += w * y[j];
                    swxx += w * x * x;
                    swxy += w * x * y[j];
                }
            }
            const double det = sw * swxx - swx * swx;
            if (std::abs(det) > 1e-12 * (sw * swxx + 1.0)) {
                const double slope = (sw * swxy - swx * swy) / det;
                const double icept = (swy - slope * swx) / sw;
                fitted[i] = icept + slope * static_cast<double>(i);
            } else {
                fitted[i] = swy / sw;
            }
        }
        if (iter == config.robust_iterations) break;

        // Bisquare reweighting from the absolute residuals. Residuals at
        // numerical-noise scale count as zero, otherwise fp jitter on an
        // exact fit would reject points at random.
        double scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(y[j]));
        const double tiny = 1e-12 * std::max(scale, 1e-300);
        std::vector<double> abs_res(n);
        for (std::size_t j = 0; j < n; ++j) abs_res[j] = std::abs(y[j] - fitted[j]);
        std::vector<double> sorted = abs_res;
        std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
        const double s = sorted[n / 2];
        if (s <= tiny) {
            // s -> 0 limit of the bisquare: keep exact points, drop outliers.
            for (std::size_t j = 0; j < n; ++j) robustness[j] = abs_res[j] <= tiny ? 1.0 : 0.0;
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double u = abs_res[j] / (6.0 * s);
            robustness[j] = u < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
        }
    }
    return fitted;
}

std::vector<double> instantaneous_frequency(std::span<const double> unwrapped_phase,
                                            const LowessConfig& config) {
    const std::size_t n = unwrapped_phase.size();
    if (n < 3) throw std::invalid_argument("instantaneous_frequency: sequence too short");

    std::vector<double> f(n);
    f[0] = (unwrapped_phase[1] - unwrapped_phase[0]) / (2.0 * kPi);
    f[n - 1] = (unwrapped_phase[n - 1] - unwrapped_phase[n - 2]) / (2.0 * kPi);
    for (std::size_t t = 1; t + 1 < n; ++t)
        f[t] = (unwrapped_phase[t + 1] - unwrapped_phase[t - 1]) / (4.0 * kPi);

    const std::size_t k =
        static_cast<std::size_t>(std::ceil(config.span * static_cast<double>(n)));
    if (n < 4 || k < 2) return f;  // too short to smooth
    return robust_lowess(f, config);
}

AnalyticMode analytic_mode(const Imf& imf, const LowessConfig& config) {
    AnalyticMode mode;
    mode.mode_index = imf.mode_index;
    mode.real_part = imf.values;
    mode.imag_part = hilbert(imf.values);

    const std::size_t n = imf.values.size();
    mode.amplitude.resize(n);
    std::vector<double> raw_phase(n);
    for (std::size_t t = 0; t < n; ++t) {
        mode.amplitude[t] = std::hypot(mode.real_part[t], mode.imag_part[t]);
        raw_phase[t] = std::atan2(mode.imag_part[t], mode.real_part[t]);
    }
    mode.phase = unwrap_phase(raw_phase);
    mode.frequency = instantaneous_frequency(mode.phase, config);
    return mode;
}

std::vector<SpectrumPoint> hilbert_spectrum(const Decomposition& decomp,
                                            const LowessConfig& config) {
    std::vector<SpectrumPoint> points;
    points.reserve(decomp.mode_count() * decomp.source_length);
    for (const auto& imf : decomp.imfs) {
        const AnalyticMode mode = analytic_mode(imf, config);
        for (std::size_t t = 0; t < mode.real_part.size(); ++t)
            points.push_back({mode.mode_index, t, mode.frequency[t],
                              mode.amplitude[t] * mode.amplitude[t], mode.amplitude[t]});
    }
    return points;
}

std::pair<std::size_t, std::size_t> interior_range(std::size_t n, double fraction) {
    const auto trim = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * (1.0 - fraction) / 2.0));
    return {trim, n - trim};
}

std::vector<ModeSummary> mode_spectrum_means(const std::vector<SpectrumPoint>& points) {
    if (points.empty()) throw std::invalid_argument("mode_spectrum_means: empty spectrum");
    std::size_t n = 0;
    int max_mode = 0;
    for (const auto& p : points) {
        n = std::max(n, p.time + 1);
        max_mode = std::max(max_mode, p.mode_index);
    }
    const auto [lo, hi] = interior_range(n);

    std::vector<double> f_sum(max_mode, 0.0), e_sum(max_mode, 0.0);
    std::vector<std::size_t> count(max_mode, 0);
    for (const auto& p : points) {
        if (p.time < lo || p.time >= hi) continue;
        const auto j = static_cast<std::size_t>(p.mode_index - 1);
        f_sum[j] += p.frequency;
        e_sum[j] += p.energy;
        ++count[j];
    }
    std::vector<ModeSummary> out;
    for (int j = 0; j < max_mode; ++j) {
        const auto c = count[static_cast<std::size_t>(j)];
        if (c == 0) continue;
        out.push_back({j + 1, f_sum[static_cast<std::size_t>(j)] / static_cast<double>(c),
                       e_sum[static_cast<std::size_t>(j)] / static_cast<double>(c)});
    }
    return out;
}

void save_csv(const std::vector<SpectrumPoint>& points, const std::string& path,
              const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "mode,t,frequency,energy,amplitude\n";
    for (const auto& p : points)
        out << p.mode_index << "," << (p.time + 1) << "," << format_double(p.frequency) << ","
            << format_double(p.energy) << "," << format_double(p.amplitude) << "\n";
}

void save_csv(const std::vector<ModeSummary>& means, const std::string& path,
              const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "mode,mean_frequency,mean_energy\n";
    for (const auto& m : means)
        out << m.mode_index << "," << format_double(m.mean_frequency) << ","
            << format_double(m.mean_energy) << "\n";
}

}  // namespace hht
