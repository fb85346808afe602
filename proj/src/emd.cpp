#include "hht/emd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hht {

namespace {

// Natural cubic spline through strictly increasing knots. Evaluation is a
// linear walk, so querying all integer t in order costs O(T + knots).
class NaturalCubicSpline {
  public:
    NaturalCubicSpline(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)), m_(x_.size(), 0.0) {
        const std::size_t k = x_.size();
        if (k < 2) throw std::invalid_argument("spline needs at least 2 knots");
        if (k == 2) return;  // linear segment, second derivatives stay 0

        // Thomas algorithm on the interior second-derivative system.
        std::vector<double> diag(k, 0.0), rhs(k, 0.0), upper(k, 0.0);
        for (std::size_t i = 1; i + 1 < k; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        for (std::size_t i = 2; i + 1 < k; ++i) {
            const double h0 = x_[i] - x_[i - 1];  // sub-diagonal entry
            const double w = h0 / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = k - 2; i >= 1; --i) {
            m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
            if (i == 1) break;
        }
    }

    // Evaluate at increasing query positions via eval_at with a cursor.
    double eval(double x, std::size_t& cursor) const {
        const std::size_t k = x_.size();
        while (cursor + 2 < k && x_[cursor + 1] < x) ++cursor;
        const double h = x_[cursor + 1] - x_[cursor];
        const double a = (x_[cursor + 1] - x) / h;
        const double b = (x - x_[cursor]) / h;
        return a * y_[cursor] + b * y_[cursor + 1] +
               ((a * a * a - a) * m_[cursor] + (b * b * b - b) * m_[cursor + 1]) *
                   (h * h) / 6.0;
    }

  private:
    std::vector<double> x_, y_, m_;
};

// Spline envelope through the given extrema, with the two extrema nearest
// each end mirrored across the endpoints as anchor knots beyond the span.
std::vector<double> spline_envelope(std::span<const double> signal,
                                    const std::vector<std::size_t>& extrema) {
    const double last = static_cast<double>(signal.size() - 1);
    const std::size_t k = extrema.size();

    std::vector<double> xs, ys;
    xs.reserve(k + 4);
    ys.reserve(k + 4);
    xs.push_back(-static_cast<double>(extrema[1]));
    ys.push_back(signal[extrema[1]]);
    xs.push_back(-static_cast<double>(extrema[0]));
    ys.push_back(signal[extrema[0]]);
    for (std::size_t i = 0; i < k; ++i) {
        xs.push_back(static_cast<double>(extrema[i]));
        ys.push_back(signal[extrema[i]]);
    }
    xs.push_back(2.0 * last - static_cast<double>(extrema[k - 1]));
    ys.push_back(signal[extrema[k - 1]]);
    xs.push_back(2.0 * last - static_cast<double>(extrema[k - 2]));
    ys.push_back(signal[extrema[k - 2]]);

    NaturalCubicSpline spline(std::move(xs), std::move(ys));
    std::vector<double> out(signal.size());
    std::size_t cursor = 0;
    for (std::size_t t = 0; t < signal.size(); ++t)
        out[t] = spline.eval(static_cast<double>(t), cursor);
    return out;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

bool imf_criterion_one(std::span<const double> signal) {
    const auto ex = find_extrema(signal);
    const auto n_extrema = ex.maxima.size() + ex.minima.size();
    const auto n_cross = zero_crossings(signal);
    const auto diff = n_extrema > n_cross ? n_extrema - n_cross : n_cross - n_extrema;
    return diff <= 1;
}

}  // namespace

ExtremaSet find_extrema(std::span<const double> signal) {
    if (signal.size() < 3) throw std::invalid_argument("find_extrema: signal too short");
    ExtremaSet out;
    int prev = 0;
    std::size_t cand_start = 0;  // first index of the current flat-or-turning region
    for (std::size_t i = 0; i + 1 < signal.size(); ++i) {
        const int s = sign_of(signal[i + 1] - signal[i]);
        if (s == 0) continue;  // plateau keeps the candidate start
        if (prev != 0 && s != prev) {
            const std::size_t idx = (cand_start + i) / 2;  // floor midpoint of a plateau
            (prev > 0 ? out.maxima : out.minima).push_back(idx);
        }
        prev = s;
        cand_start = i + 1;
    }
    return out;
}

std::size_t zero_crossings(std::span<const double> signal) {
    std::size_t count = 0;
    int prev = 0;
    for (const double v : signal) {
        const int s = sign_of(v);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

bool is_residue(std::span<const double> signal) {
    if (signal.size() < 3) return true;
    const auto ex = find_extrema(signal);
    return ex.maxima.size() + ex.minima.size() <= 1;
}

std::vector<double> envelope_mean(std::span<const double> signal) {
    const auto ex = find_extrema(signal);
    if (ex.maxima.size() < 2 || ex.minima.size() < 2)
        throw std::invalid_argument("envelope_mean: too few extrema");
    const auto upper = spline_envelope(signal, ex.maxima);
    const auto lower = spline_envelope(signal, ex.minima);
    std::vector<double> mean(signal.size());
    for (std::size_t t = 0; t < signal.size(); ++t) mean[t] = 0.5 * (upper[t] + lower[t]);
    return mean;
}

Imf sift(std::span<const double> signal, const SiftConfig& config) {
    if (config.sd_threshold <= 0.0 || config.max_sift_iterations < 1)
        throw std::invalid_argument("sift: bad config");
    if (is_residue(signal)) throw std::invalid_argument("sift: signal is already a residue");

    std::vector<double> c(signal.begin(), signal.end());
    for (int it = 0; it < config.max_sift_iterations; ++it) {
        std::vector<double> m;
        try {
            m = envelope_mean(c);
        } catch (const std::invalid_argument&) {
            break;  // extrema vanished mid-sift: current iterate is final
        }
        double num = 0.0, den = 0.0;
        for (std::size_t t = 0; t < c.size(); ++t) {
            num += m[t] * m[t];
            den += c[t] * c[t];
        }
        for (std::size_t t = 0; t < c.size(); ++t) c[t] -= m[t];
        const double sd = den > 0.0 ? num / den : 0.0;
        if (sd < config.sd_threshold && imf_criterion_one(c)) break;
    }
    return Imf{std::move(c), 0};
}

Decomposition emd(std::span<const double> signal, const SiftConfig& config) {
    if (signal.size() < 8) throw std::invalid_argument("emd: series too short (need T >= 8)");

    Decomposition decomp;
    decomp.source_length = signal.size();
    std::vector<double> r(signal.begin(), signal.end());

    while (true) {
        if (config.max_modes > 0 &&
            decomp.imfs.size() >= static_cast<std::size_t>(config.max_modes))
            break;
        if (is_residue(r)) break;
        const auto ex = find_extrema(r);
        if (ex.maxima.size() < 2 || ex.minima.size() < 2) break;  // cannot envelope

        Imf imf = sift(r, config);
        for (std::size_t t = 0; t < r.size(); ++t) r[t] -= imf.values[t];
        imf.mode_index = static_cast<int>(decomp.imfs.size()) + 1;
        decomp.imfs.push_back(std::move(imf));
    }
    decomp.residue = std::move(r);
    return decomp;
}

Decomposition emd(const TimeSeries& series, const SiftConfig& config) {
    return emd(std::span<const double>(series.values), config);
}

std::vector<double> Decomposition::reconstruct() const {
    std::vector<double> out = residue;
    for (const auto& imf : imfs)
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += imf.values[t];
    return out;
}

void save_csv(const Decomposition& decomp, const std::string& path,
              const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "t";
    for (std::size_t j = 0; j < decomp.imfs.size(); ++j) out << ",imf_" << (j + 1);
    out << ",residue\n";
    for (std::size_t t = 0; t < decomp.residue.size(); ++t) {
        out << (t + 1);
        for (const auto& imf : decomp.imfs) out << "," << format_double(imf.values[t]);
        out << "," << format_double(decomp.residue[t]) << "\n";
    }
}

}  // namespace hht
