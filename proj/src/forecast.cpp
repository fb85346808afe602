#include "hht/forecast.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace hht {

namespace {

// Standardized design matrix with zero-variance columns flagged: they get
// weight 0 rather than entering a (possibly singular) solve.
struct StandardizedDesign {
    Eigen::MatrixXd z;               // n x p_active
    Eigen::VectorXd y;
    std::vector<std::size_t> active; // original column index per z column
};

StandardizedDesign standardize(const FeatureMatrix& ds) {
    const std::size_t n = ds.row_count();
    const std::size_t p = ds.col_count();
    StandardizedDesign out;
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> col(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = (ds.rows[i][j] - ds.col_mean[j]) / ds.col_scale[j];
            ss += col[i] * col[i];
        }
        if (ss <= 1e-12 * static_cast<double>(n)) continue;  // constant column
        out.active.push_back(j);
        cols.push_back(std::move(col));
    }
    out.z.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            out.z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
    out.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out.y(static_cast<Eigen::Index>(i)) = ds.targets[i];
    return out;
}

double mean_squared_error(std::span<const double> pred, std::span<const double> actual) {
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - actual[i];
        s += e * e;
    }
    return pred.empty() ? 0.0 : s / static_cast<double>(pred.size());
}

}  // namespace

double RidgeModel::predict(std::span<const double> features) const {
    if (features.size() != weights.size())
        throw std::invalid_argument("ridge predict: feature length mismatch");
    double y = intercept;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] == 0.0) continue;
        y += weights[j] * (features[j] - col_mean[j]) / col_scale[j];
    }
    return y;
}

RidgeModel fit_ridge(const FeatureMatrix& dataset, double regularization) {
    if (dataset.row_count() < 2)
        throw std::invalid_argument("fit_ridge: need at least 2 rows");
    if (regularization < 0.0)
        throw std::invalid_argument("fit_ridge: regularization must be >= 0");

    const auto design = standardize(dataset);
    const auto n = design.z.rows();
    const auto p = design.z.cols();

    // Full normal equations over [Z 1]; only the weights are penalized.
    Eigen::MatrixXd g(p + 1, p + 1);
    g.topLeftCorner(p, p) = design.z.transpose() * design.z;
    g.topLeftCorner(p, p).diagonal().array() += regularization;
    g.block(0, p, p, 1) = design.z.colwise().sum().transpose();
    g.block(p, 0, 1, p) = design.z.colwise().sum();
    g(p, p) = static_cast<double>(n);
    Eigen::VectorXd rhs(p + 1);
    rhs.head(p) = design.z.transpose() * design.y;
    rhs(p) = design.y.sum();

    const Eigen::VectorXd sol = g.ldlt().solve(rhs);

    RidgeModel model;
    model.regularization = regularization;
    model.col_mean = dataset.col_mean;
    model.col_scale = dataset.col_scale;
    model.weights.assign(dataset.col_count(), 0.0);
    for (Eigen::Index j = 0; j < p; ++j)
        model.weights[design.active[static_cast<std::size_t>(j)]] = sol(j);
    model.intercept = sol(p);
    return model;
}

double RidgeRegressor::select_regularization(const FeatureMatrix& dataset) const {
    const auto design = standardize(dataset);
    const auto n = design.z.rows();
    if (design.z.cols() == 0) return 1.0;  // intercept-only; value is irrelevant

    const double y_mean = design.y.mean();
    const Eigen::MatrixXd zc = design.z.rowwise() - design.z.colwise().mean();
    const Eigen::VectorXd yc = design.y.array() - y_mean;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(zc, Eigen::ComputeThinU);
    const Eigen::VectorXd d = svd.singularValues();
    const Eigen::VectorXd uty = svd.matrixU().transpose() * yc;

    double best_gcv = std::numeric_limits<double>::infinity();
    double best_reg = 1.0;
    for (int e = -4; e <= 2; ++e) {
        const double reg = std::pow(10.0, e);
        double df = 1.0;  // intercept
        Eigen::VectorXd shrunk = uty;
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            const double d2 = d(i) * d(i);
            df += d2 / (d2 + reg);
            shrunk(i) *= d2 / (d2 + reg);
        }
        if (df >= static_cast<double>(n)) continue;
        const double rss =
            (yc - svd.matrixU() * shrunk).squaredNorm();
        const double denom = static_cast<double>(n) - df;
        const double gcv = static_cast<double>(n) * rss / (denom * denom);
        if (gcv < best_gcv) {
            best_gcv = gcv;
            best_reg = reg;
        }
    }
    return best_reg;
}

std::unique_ptr<Predictor> RidgeRegressor::fit(const FeatureMatrix& dataset) const {
    const double reg = fixed_reg_ ? *fixed_reg_ : select_regularization(dataset);
    return std::make_unique<RidgeModel>(fit_ridge(dataset, reg));
}

ForecastReport evaluate_split(const TimeSeries& series, std::size_t T1, std::size_t T2,
                              std::size_t tau, const FeatureSetSelector& selector,
                              const EnsembleConfig& ensemble, const LowessConfig& lowess,
                              const Regressor& regressor) {
    const std::size_t T = series.size();
    if (T1 + T2 > T) throw std::invalid_argument("evaluate_split: T1 + T2 exceeds series length");
    if (T1 < tau + 2) throw std::invalid_argument("evaluate_split: training section too short");
    if (T2 < 1) throw std::invalid_argument("evaluate_split: empty test section");

    const auto t0 = std::chrono::steady_clock::now();
    // One decomposition over the whole train+test span (the leaky protocol).
    const std::span<const double> values(series.values.data(), T1 + T2);
    const Decomposition decomp = ceemd(values, ensemble);
    std::vector<AnalyticMode> modes;
    for (const auto& imf : decomp.imfs) modes.push_back(analytic_mode(imf, lowess));

    const FeatureMatrix train =
        build_dataset_from(decomp, modes, values, tau - 1, T1 - 2, tau, selector);
    const auto model = regressor.fit(train);

    ForecastReport report;
    for (std::size_t t = T1 - 1; t + 1 < T1 + T2; ++t) {
        const auto features = build_features(decomp, modes, t, tau, selector);
        report.predictions.push_back(model->predict(features));
        report.actuals.push_back(values[t + 1] - values[t]);
    }
    report.mse = mean_squared_error(report.predictions, report.actuals);
    double naive = 0.0;
    for (const double a : report.actuals) naive += a * a;
    report.naive_mse = naive / static_cast<double>(report.actuals.size());
    report.step_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return report;
}

double walk_forward_step(std::span<const double> values, std::size_t t,
                         std::size_t train_window, std::size_t tau,
                         const FeatureSetSelector& selector,
                         const EnsembleConfig& ensemble, const LowessConfig& lowess,
                         const Regressor& regressor) {
    if (t < train_window) throw std::invalid_argument("walk_forward: window precedes series");
    if (t > values.size()) throw std::invalid_argument("walk_forward: step beyond series");
    if (train_window < tau + 3)
        throw std::invalid_argument("walk_forward: window too short for tau");

    // Everything below sees only x(s), s in [t - train_window, t - 1].
    const std::span<const double> w = values.subspan(t - train_window, train_window);
    const Decomposition decomp = ceemd(w, ensemble);
    std::vector<AnalyticMode> modes;
    for (const auto& imf : decomp.imfs) modes.push_back(analytic_mode(imf, lowess));

    const FeatureMatrix train =
        build_dataset_from(decomp, modes, w, tau - 1, train_window - 2, tau, selector);
    const auto model = regressor.fit(train);
    const auto features = build_features(decomp, modes, train_window - 1, tau, selector);
    return w[train_window - 1] + model->predict(features);
}

namespace {

// The cached mode: one decomposition spanning every step's window, reused
// for all steps. Models are still refit per step on window-local rows.
ForecastReport walk_forward_cached(const TimeSeries& series, std::size_t first_test,
                                   std::size_t n_steps, std::size_t train_window,
                                   std::size_t tau, const FeatureSetSelector& selector,
                                   const EnsembleConfig& ensemble, const LowessConfig& lowess,
                                   const Regressor& regressor) {
    const std::size_t span_begin = first_test - train_window;
    const std::size_t span_len = train_window + n_steps - 1;  // up to the last feature time
    const std::span<const double> values(series.values.data() + span_begin, span_len);
    const Decomposition decomp = ceemd(values, ensemble);
    std::vector<AnalyticMode> modes;
    for (const auto& imf : decomp.imfs) modes.push_back(analytic_mode(imf, lowess));

    ForecastReport report;
    for (std::size_t t = first_test; t < first_test + n_steps; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const std::size_t local_end = t - span_begin - 1;  // t-1 in span coordinates
            const FeatureMatrix train =
                build_dataset_from(decomp, modes, values, local_end - train_window + tau,
                                   local_end - 1, tau, selector);
            const auto model = regressor.fit(train);
            const auto features = build_features(decomp, modes, local_end, tau, selector);
            report.predictions.push_back(series.values[t - 1] + model->predict(features));
        } catch (const std::exception& e) {
            throw std::runtime_error("walk_forward failed at step " + std::to_string(t) +
                                     ": " + e.what());
        }
        report.actuals.push_back(series.values[t]);
        report.step_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    report.mse = mean_squared_error(report.predictions, report.actuals);
    report.naive_mse = naive_benchmark(series, first_test, first_test + n_steps - 1);
    return report;
}

}  // namespace

ForecastReport walk_forward(const TimeSeries& series, std::size_t first_test,
                            std::size_t n_steps, std::size_t train_window,
                            std::size_t tau, const FeatureSetSelector& selector,
                            const EnsembleConfig& ensemble, const LowessConfig& lowess,
                            const Regressor& regressor, bool fast_approximate) {
    if (first_test < train_window)
        throw std::invalid_argument("walk_forward: first test index precedes training window");
    if (first_test + n_steps > series.size())
        throw std::invalid_argument("walk_forward: test range exceeds series length");
    if (n_steps < 1) throw std::invalid_argument("walk_forward: no test steps");

    if (fast_approximate)
        return walk_forward_cached(series, first_test, n_steps, train_window, tau, selector,
                                   ensemble, lowess, regressor);

    ForecastReport report;
    for (std::size_t t = first_test; t < first_test + n_steps; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        double prediction = 0.0;
        try {
            prediction = walk_forward_step(series.values, t, train_window, tau, selector,
                                           ensemble, lowess, regressor);
        } catch (const std::exception& e) {
            throw std::runtime_error("walk_forward failed at step " + std::to_string(t) +
                                     ": " + e.what());
        }
        report.predictions.push_back(prediction);
        report.actuals.push_back(series.values[t]);
        report.step_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    report.mse = mean_squared_error(report.predictions, report.actuals);
    report.naive_mse = naive_benchmark(series, first_test, first_test + n_steps - 1);
    return report;
}

ForecastReport walk_forward_lags(const TimeSeries& series, std::size_t first_test,
                                 std::size_t n_steps, std::size_t train_window,
                                 std::size_t tau, const Regressor& regressor) {
    if (first_test < train_window)
        throw std::invalid_argument("walk_forward: first test index precedes training window");
    if (first_test + n_steps > series.size())
        throw std::invalid_argument("walk_forward: test range exceeds series length");
    if (train_window < tau + 3)
        throw std::invalid_argument("walk_forward: window too short for tau");

    ForecastReport report;
    for (std::size_t t = first_test; t < first_test + n_steps; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::span<const double> w(series.values.data() + (t - train_window), train_window);
        const FeatureMatrix train = build_lag_dataset(w, tau - 1, train_window - 2, tau);
        const auto model = regressor.fit(train);
        const auto features = window(w, train_window - 1, tau);
        report.predictions.push_back(w[train_window - 1] + model->predict(features));
        report.actuals.push_back(series.values[t]);
        report.step_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    report.mse = mean_squared_error(report.predictions, report.actuals);
    report.naive_mse = naive_benchmark(series, first_test, first_test + n_steps - 1);
    return report;
}

double naive_benchmark(const TimeSeries& series, std::size_t first, std::size_t last) {
    if (first < 1 || first > last || last >= series.size())
        throw std::invalid_argument("naive_benchmark: bad range");
    double s = 0.0;
    for (std::size_t t = first; t <= last; ++t) {
        const double d = series.values[t] - series.values[t - 1];
        s += d * d;
    }
    return s / static_cast<double>(last - first + 1);
}

std::vector<double> rolling_mse(const ForecastReport& report, std::size_t window) {
    const std::size_t n = report.predictions.size();
    if (window < 1 || window > n)
        throw std::invalid_argument("rolling_mse: window out of range");
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = report.predictions[i] - report.actuals[i];
        sq[i] = e * e;
    }
    std::vector<double> out;
    out.reserve(n - window + 1);
    for (std::size_t k = 0; k + window <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = k; i < k + window; ++i) s += sq[i];
        out.push_back(s / static_cast<double>(window));
    }
    return out;
}

void save_json(const ForecastReport& report, const std::string& path,
               const std::string& config_digest,
               const std::vector<std::pair<std::string, double>>& extra) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "{\n";
    out << "  \"config_digest\": \"" << config_digest << "\",\n";
    out << "  \"steps\": " << report.predictions.size() << ",\n";
    out << "  \"mse\": " << format_double(report.mse) << ",\n";
    out << "  \"naive_mse\": " << format_double(report.naive_mse);
    for (const auto& [key, value] : extra)
        out << ",\n  \"" << key << "\": " << format_double(value);
    out << "\n}\n";
}

void save_csv(const ForecastReport& report, const std::string& path,
              const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "step,prediction,actual,squared_error\n";
    for (std::size_t i = 0; i < report.predictions.size(); ++i) {
        const double e = report.predictions[i] - report.actuals[i];
        out << (i + 1) << "," << format_double(report.predictions[i]) << ","
            << format_double(report.actuals[i]) << "," << format_double(e * e) << "\n";
    }
}

}  // namespace hht
