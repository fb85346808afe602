#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <vector>

#include "hht/ceemd.hpp"
#include "hht/cli.hpp"
#include "hht/features.hpp"
#include "hht/filters.hpp"
#include "hht/forecast.hpp"
#include "hht/hsa.hpp"
#include "hht/time_series.hpp"

namespace py = pybind11;
using namespace hht;

namespace {

// Adapters: the C++ API takes spans; the bound API takes lists/arrays.
std::span<const double> as_span(const std::vector<double>& v) { return {v.data(), v.size()}; }

// A Python object with fit(dataset) -> model / model.predict(features)
// plugged into the C++ Regressor interface.
class PyPredictor : public Predictor {
  public:
    explicit PyPredictor(py::object model) : model_(std::move(model)) {}
    double predict(std::span<const double> features) const override {
        py::gil_scoped_acquire gil;
        return model_
            .attr("predict")(std::vector<double>(features.begin(), features.end()))
            .cast<double>();
    }

  private:
    py::object model_;
};

class PyRegressor : public Regressor {
  public:
    explicit PyRegressor(py::object impl) : impl_(std::move(impl)) {}
    std::unique_ptr<Predictor> fit(const FeatureMatrix& dataset) const override {
        py::gil_scoped_acquire gil;
        return std::make_unique<PyPredictor>(impl_.attr("fit")(dataset));
    }

  private:
    py::object impl_;
};

// Accept either a built-in RidgeRegressor or any Python duck-typed object.
std::unique_ptr<Regressor> make_regressor(const py::object& obj) {
    if (py::isinstance<RidgeRegressor>(obj)) {
        return std::make_unique<RidgeRegressor>(obj.cast<RidgeRegressor>());
    }
    return std::make_unique<PyRegressor>(obj);
}

}  // namespace

PYBIND11_MODULE(_hht, m) {
    m.doc() = "CEEMD + Hilbert-Huang transform toolkit";

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init<>())
        .def(py::init([](std::vector<double> values, std::string name) {
                 TimeSeries s;
                 s.values = std::move(values);
                 s.name = std::move(name);
                 return s;
             }),
             py::arg("values"), py::arg("name") = "value")
        .def_readwrite("values", &TimeSeries::values)
        .def_readwrite("timestamps", &TimeSeries::timestamps)
        .def_readwrite("name", &TimeSeries::name)
        .def("__len__", &TimeSeries::size);

    m.def("load_csv", &load_csv, py::arg("path"), py::arg("value_column"),
          py::arg("timestamp_column") = "");
    m.def("save_csv", py::overload_cast<const TimeSeries&, const std::string&,
                                        const std::string&>(&save_csv),
          py::arg("series"), py::arg("path"), py::arg("header_comment") = "");
    m.def("log_transform", &log_transform);
    m.def(
        "window",
        [](const std::vector<double>& v, std::size_t t, std::size_t tau) {
            return window(as_span(v), t, tau);
        },
        py::arg("values"), py::arg("t"), py::arg("tau"));

    py::class_<SiftConfig>(m, "SiftConfig")
        .def(py::init<>())
        .def_readwrite("sd_threshold", &SiftConfig::sd_threshold)
        .def_readwrite("max_sift_iterations", &SiftConfig::max_sift_iterations)
        .def_readwrite("max_modes", &SiftConfig::max_modes);

    py::class_<Imf>(m, "Imf")
        .def(py::init([](std::vector<double> values, int mode_index) {
                 return Imf{std::move(values), mode_index};
             }),
             py::arg("values"), py::arg("mode_index") = 1)
        .def_readwrite("values", &Imf::values)
        .def_readwrite("mode_index", &Imf::mode_index);

    py::class_<Decomposition>(m, "Decomposition")
        .def_readonly("imfs", &Decomposition::imfs)
        .def_readonly("residue", &Decomposition::residue)
        .def_readonly("source_length", &Decomposition::source_length)
        .def_property_readonly("mode_count", &Decomposition::mode_count)
        .def("reconstruct", &Decomposition::reconstruct);

    py::class_<ExtremaSet>(m, "ExtremaSet")
        .def_readonly("maxima", &ExtremaSet::maxima)
        .def_readonly("minima", &ExtremaSet::minima);

    m.def("find_extrema",
          [](const std::vector<double>& v) { return find_extrema(as_span(v)); });
    m.def("zero_crossings",
          [](const std::vector<double>& v) { return zero_crossings(as_span(v)); });
    m.def("is_residue", [](const std::vector<double>& v) { return is_residue(as_span(v)); });
    m.def("envelope_mean",
          [](const std::vector<double>& v) { return envelope_mean(as_span(v)); });
    m.def(
        "sift",
        [](const std::vector<double>& v, const SiftConfig& cfg) { return sift(as_span(v), cfg); },
        py::arg("signal"), py::arg("config") = SiftConfig{});
    m.def(
        "emd",
        [](const std::vector<double>& v, const SiftConfig& cfg) { return emd(as_span(v), cfg); },
        py::arg("signal"), py::arg("config") = SiftConfig{});

    py::class_<EnsembleConfig>(m, "EnsembleConfig")
        .def(py::init<>())
        .def_readwrite("trials", &EnsembleConfig::trials)
        .def_readwrite("noise_sigma", &EnsembleConfig::noise_sigma)
        .def_readwrite("seed", &EnsembleConfig::seed)
        .def_readwrite("sift", &EnsembleConfig::sift)
        .def_readwrite("target_modes", &EnsembleConfig::target_modes);

    m.def(
        "eemd",
        [](const std::vector<double>& v, const EnsembleConfig& cfg) {
            return eemd(as_span(v), cfg);
        },
        py::arg("signal"), py::arg("config"));
    m.def(
        "ceemd",
        [](const std::vector<double>& v, const EnsembleConfig& cfg) {
            return ceemd(as_span(v), cfg);
        },
        py::arg("signal"), py::arg("config"));

    py::class_<EndEffectErrorReport>(m, "EndEffectErrorReport")
        .def_readonly("lambda_bin_edges", &EndEffectErrorReport::lambda_bin_edges)
        .def_readonly("rmse", &EndEffectErrorReport::rmse)
        .def_readonly("max_abs_error_sum", &EndEffectErrorReport::max_abs_error_sum)
        .def_readonly("replications", &EndEffectErrorReport::replications);

    m.def("characterize_end_effect", &characterize_end_effect, py::arg("truth_modes"),
          py::arg("config"), py::arg("replications"));

    py::class_<LowessConfig>(m, "LowessConfig")
        .def(py::init<>())
        .def_readwrite("span", &LowessConfig::span)
        .def_readwrite("robust_iterations", &LowessConfig::robust_iterations);

    py::class_<AnalyticMode>(m, "AnalyticMode")
        .def_readonly("real_part", &AnalyticMode::real_part)
        .def_readonly("imag_part", &AnalyticMode::imag_part)
        .def_readonly("amplitude", &AnalyticMode::amplitude)
        .def_readonly("phase", &AnalyticMode::phase)
        .def_readonly("frequency", &AnalyticMode::frequency)
        .def_readonly("mode_index", &AnalyticMode::mode_index);

    py::class_<SpectrumPoint>(m, "SpectrumPoint")
        .def_readonly("mode_index", &SpectrumPoint::mode_index)
        .def_readonly("time", &SpectrumPoint::time)
        .def_readonly("frequency", &SpectrumPoint::frequency)
        .def_readonly("energy", &SpectrumPoint::energy)
        .def_readonly("amplitude", &SpectrumPoint::amplitude);

    py::class_<ModeSummary>(m, "ModeSummary")
        .def_readonly("mode_index", &ModeSummary::mode_index)
        .def_readonly("mean_frequency", &ModeSummary::mean_frequency)
        .def_readonly("mean_energy", &ModeSummary::mean_energy);

    m.def("hilbert", [](const std::vector<double>& v) { return hilbert(as_span(v)); });
    m.def("unwrap_phase",
          [](const std::vector<double>& v) { return unwrap_phase(as_span(v)); });
    m.def(
        "robust_lowess",
        [](const std::vector<double>& v, const LowessConfig& cfg) {
            return robust_lowess(as_span(v), cfg);
        },
        py::arg("y"), py::arg("config") = LowessConfig{});
    m.def(
        "instantaneous_frequency",
        [](const std::vector<double>& v, const LowessConfig& cfg) {
            return instantaneous_frequency(as_span(v), cfg);
        },
        py::arg("unwrapped_phase"), py::arg("config") = LowessConfig{});
    m.def("analytic_mode", &analytic_mode, py::arg("imf"),
          py::arg("config") = LowessConfig{});
    m.def("hilbert_spectrum", &hilbert_spectrum, py::arg("decomposition"),
          py::arg("config") = LowessConfig{});
    m.def("mode_spectrum_means", &mode_spectrum_means);

    m.def("low_pass", &low_pass, py::arg("decomposition"), py::arg("cutoff_mode"));
    m.def("high_pass", &high_pass, py::arg("decomposition"), py::arg("cutoff_mode"));

    py::enum_<ModeSubset>(m, "ModeSubset")
        .value("All", ModeSubset::All)
        .value("FirstK", ModeSubset::FirstK)
        .value("LastK", ModeSubset::LastK);

    py::class_<FeatureSetSelector>(m, "FeatureSetSelector")
        .def(py::init<>())
        .def_readwrite("include_imf", &FeatureSetSelector::include_imf)
        .def_readwrite("include_hilbert", &FeatureSetSelector::include_hilbert)
        .def_readwrite("include_amplitude", &FeatureSetSelector::include_amplitude)
        .def_readwrite("include_frequency", &FeatureSetSelector::include_frequency)
        .def_readwrite("include_lambda", &FeatureSetSelector::include_lambda)
        .def_readwrite("subset", &FeatureSetSelector::subset)
        .def_readwrite("k", &FeatureSetSelector::k);

    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def_readonly("rows", &FeatureMatrix::rows)
        .def_readonly("targets", &FeatureMatrix::targets)
        .def_readonly("t_index", &FeatureMatrix::t_index)
        .def_readonly("tau", &FeatureMatrix::tau)
        .def_readonly("column_names", &FeatureMatrix::column_names)
        .def_readonly("col_mean", &FeatureMatrix::col_mean)
        .def_readonly("col_scale", &FeatureMatrix::col_scale);

    m.def("end_effect_factor", &end_effect_factor, py::arg("t"), py::arg("interval_start"),
          py::arg("interval_end"));
    m.def("build_features", &build_features, py::arg("decomposition"), py::arg("modes"),
          py::arg("t"), py::arg("tau"), py::arg("selector"));
    m.def("build_dataset", &build_dataset, py::arg("series"), py::arg("t_first"),
          py::arg("t_last"), py::arg("tau"), py::arg("selector"), py::arg("ensemble"),
          py::arg("lowess") = LowessConfig{});
    m.def(
        "build_lag_dataset",
        [](const std::vector<double>& v, std::size_t t_first, std::size_t t_last,
           std::size_t tau) { return build_lag_dataset(as_span(v), t_first, t_last, tau); },
        py::arg("values"), py::arg("t_first"), py::arg("t_last"), py::arg("tau"));

    py::class_<RidgeModel>(m, "RidgeModel")
        .def_readonly("weights", &RidgeModel::weights)
        .def_readonly("intercept", &RidgeModel::intercept)
        .def_readonly("regularization", &RidgeModel::regularization)
        .def("predict", [](const RidgeModel& model, const std::vector<double>& x) {
            return model.predict(as_span(x));
        });

    m.def("fit_ridge", &fit_ridge, py::arg("dataset"), py::arg("regularization"));

    py::class_<RidgeRegressor>(m, "RidgeRegressor")
        .def(py::init<>())
        .def(py::init<double>(), py::arg("regularization"))
        .def("select_regularization", &RidgeRegressor::select_regularization)
        .def("fit", [](const RidgeRegressor& reg, const FeatureMatrix& ds) {
            auto model = reg.fit(ds);
            return *static_cast<RidgeModel*>(model.get());
        });

    py::class_<ForecastReport>(m, "ForecastReport")
        .def_readonly("predictions", &ForecastReport::predictions)
        .def_readonly("actuals", &ForecastReport::actuals)
        .def_readonly("mse", &ForecastReport::mse)
        .def_readonly("naive_mse", &ForecastReport::naive_mse)
        .def_readonly("step_seconds", &ForecastReport::step_seconds);

    m.def(
        "evaluate_split",
        [](const TimeSeries& s, std::size_t t1, std::size_t t2, std::size_t tau,
           const FeatureSetSelector& sel, const EnsembleConfig& ens, const LowessConfig& low,
           const py::object& regressor) {
            return evaluate_split(s, t1, t2, tau, sel, ens, low, *make_regressor(regressor));
        },
        py::arg("series"), py::arg("t1"), py::arg("t2"), py::arg("tau"), py::arg("selector"),
        py::arg("ensemble"), py::arg("lowess") = LowessConfig{},
        py::arg("regressor") = py::cast(RidgeRegressor{}));
    m.def(
        "walk_forward",
        [](const TimeSeries& s, std::size_t first_test, std::size_t n_steps,
           std::size_t train_window, std::size_t tau, const FeatureSetSelector& sel,
           const EnsembleConfig& ens, const LowessConfig& low, const py::object& regressor,
           bool fast_approximate) {
            return walk_forward(s, first_test, n_steps, train_window, tau, sel, ens, low,
                                *make_regressor(regressor), fast_approximate);
        },
        py::arg("series"), py::arg("first_test"), py::arg("n_steps"), py::arg("train_window"),
        py::arg("tau"), py::arg("selector"), py::arg("ensemble"),
        py::arg("lowess") = LowessConfig{},
        py::arg("regressor") = py::cast(RidgeRegressor{}),
        py::arg("fast_approximate") = false);
    m.def(
        "walk_forward_step",
        [](const std::vector<double>& values, std::size_t t, std::size_t train_window,
           std::size_t tau, const FeatureSetSelector& sel, const EnsembleConfig& ens,
           const LowessConfig& low, const py::object& regressor) {
            return walk_forward_step(as_span(values), t, train_window, tau, sel, ens, low,
                                     *make_regressor(regressor));
        },
        py::arg("values"), py::arg("t"), py::arg("train_window"), py::arg("tau"),
        py::arg("selector"), py::arg("ensemble"), py::arg("lowess") = LowessConfig{},
        py::arg("regressor") = py::cast(RidgeRegressor{}));
    m.def(
        "walk_forward_lags",
        [](const TimeSeries& s, std::size_t first_test, std::size_t n_steps,
           std::size_t train_window, std::size_t tau, const py::object& regressor) {
            return walk_forward_lags(s, first_test, n_steps, train_window, tau,
                                     *make_regressor(regressor));
        },
        py::arg("series"), py::arg("first_test"), py::arg("n_steps"), py::arg("train_window"),
        py::arg("tau"), py::arg("regressor") = py::cast(RidgeRegressor{}));

    m.def("naive_benchmark", &naive_benchmark, py::arg("series"), py::arg("first"),
          py::arg("last"));
    m.def("rolling_mse", &rolling_mse, py::arg("report"), py::arg("window"));
}
