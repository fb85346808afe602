#ifndef HHT_FORECAST_HPP
#define HHT_FORECAST_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hht/features.hpp"

namespace hht {

/// A fitted model; predict is deterministic and uses only what fit saw.
class Predictor {
  public:
    virtual ~Predictor() = default;
    virtual double predict(std::span<const double> features) const = 0;
};

/// Stateless factory: fit builds a fresh Predictor from the rows supplied.
class Regressor {
  public:
    virtual ~Regressor() = default;
    virtual std::unique_ptr<Predictor> fit(const FeatureMatrix& dataset) const = 0;
};

/// Linear model over standardized features with an unpenalized intercept.
struct RidgeModel : Predictor {
    std::vector<double> weights;
    double intercept = 0.0;
    double regularization = 0.0;
    std::vector<double> col_mean;
    std::vector<double> col_scale;

    double predict(std::span<const double> features) const override;
};

/// Closed-form ridge fit: minimizes sum((y - w.z - b)^2) + reg*|w|^2 over
/// the dataset's standardized features. Zero-variance columns get weight 0.
RidgeModel fit_ridge(const FeatureMatrix& dataset, double regularization);

/// Ridge with the regularization either fixed or chosen by generalized
/// cross-validation over a log grid (1e-4 .. 1e2) on the training rows.
class RidgeRegressor : public Regressor {
  public:
    RidgeRegressor() = default;
    explicit RidgeRegressor(double fixed_regularization)
        : fixed_reg_(fixed_regularization) {}

    std::unique_ptr<Predictor> fit(const FeatureMatrix& dataset) const override;

    /// The GCV choice on a dataset (exposed for inspection/tests).
    double select_regularization(const FeatureMatrix& dataset) const;

  private:
    std::optional<double> fixed_reg_;
};

struct ForecastReport {
    std::vector<double> predictions;
    std::vector<double> actuals;
    double mse = 0.0;
    double naive_mse = 0.0;
    std::vector<double> step_seconds;  // timing only; never serialized
};

/// The single-decomposition train/test split: decompose the first T1+T2
/// samples once (the decomposition sees the test section -- this protocol
/// is deliberately leaky), fit on rows t = tau..T1-1, score one-step-ahead
/// change predictions on rows t = T1..T1+T2-1. Indices are 1-based counts:
/// T1 training samples followed by T2 test targets. Predictions/actuals
/// are in delta-x space.
ForecastReport evaluate_split(const TimeSeries& series, std::size_t T1, std::size_t T2,
                              std::size_t tau, const FeatureSetSelector& selector,
                              const EnsembleConfig& ensemble, const LowessConfig& lowess,
                              const Regressor& regressor);

/// Walk-forward extrapolating protocol: for each test step t, decompose
/// only x(s), s in [t - T_window, t - 1], fit within that window, predict
/// x(t) = x(t-1) + predicted change from features at t-1. No sample at
/// index >= t is touched until scoring. first_test is the 0-based index of
/// the first predicted sample; predictions/actuals are in x space.
///
/// fast_approximate replaces the mandatory per-step re-decomposition with
/// a single cached decomposition spanning all windows. It is much cheaper
/// but approximate: the shared decomposition lets boundary information
/// cross step boundaries, so it forfeits the leakage-freedom guarantee.
ForecastReport walk_forward(const TimeSeries& series, std::size_t first_test,
                            std::size_t n_steps, std::size_t train_window,
                            std::size_t tau, const FeatureSetSelector& selector,
                            const EnsembleConfig& ensemble, const LowessConfig& lowess,
                            const Regressor& regressor, bool fast_approximate = false);

/// One walk-forward step: the prediction for sample index t (0-based),
/// computed from x[t - train_window .. t - 1] only. walk_forward loops
/// over exactly this function.
double walk_forward_step(std::span<const double> values, std::size_t t,
                         std::size_t train_window, std::size_t tau,
                         const FeatureSetSelector& selector,
                         const EnsembleConfig& ensemble, const LowessConfig& lowess,
                         const Regressor& regressor);

/// Same protocol with plain lagged values of x as the only features
/// (the classic benchmark to beat); no decomposition involved.
ForecastReport walk_forward_lags(const TimeSeries& series, std::size_t first_test,
                                 std::size_t n_steps, std::size_t train_window,
                                 std::size_t tau, const Regressor& regressor);

/// MSE of the naive prediction x_hat(t) = x(t-1) over 0-based sample
/// indices [first, last], inclusive; first must be >= 1.
double naive_benchmark(const TimeSeries& series, std::size_t first, std::size_t last);

/// Trailing mean of squared errors over each window of the given length.
std::vector<double> rolling_mse(const ForecastReport& report, std::size_t window);

/// Summary JSON (mse, naive_mse, counts; config digest as a field).
void save_json(const ForecastReport& report, const std::string& path,
               const std::string& config_digest,
               const std::vector<std::pair<std::string, double>>& extra = {});

/// Per-step CSV: step, prediction, actual, squared_error.
void save_csv(const ForecastReport& report, const std::string& path,
              const std::string& header_comment = "");

}  // namespace hht

#endif
