"""CEEMD + Hilbert-Huang transform toolkit.

Decompose a nonstationary series into intrinsic mode functions, analyze the
instantaneous energy-frequency spectrum, filter by mode, build HHT feature
datasets, and run leakage-safe walk-forward forecasts. The heavy lifting
lives in the compiled `_hht` extension; this package re-exports it.

Custom regressors plug into the forecasting harness as plain Python objects
with `fit(dataset) -> model` and `model.predict(features) -> float`.
"""

from ._hht import (  # noqa: F401
    AnalyticMode,
    Decomposition,
    EndEffectErrorReport,
    EnsembleConfig,
    ExtremaSet,
    FeatureMatrix,
    FeatureSetSelector,
    ForecastReport,
    Imf,
    LowessConfig,
    ModeSubset,
    ModeSummary,
    RidgeModel,
    RidgeRegressor,
    SiftConfig,
    SpectrumPoint,
    TimeSeries,
    analytic_mode,
    build_dataset,
    build_features,
    build_lag_dataset,
    ceemd,
    characterize_end_effect,
    eemd,
    emd,
    end_effect_factor,
    envelope_mean,
    evaluate_split,
    find_extrema,
    fit_ridge,
    hilbert,
    hilbert_spectrum,
    high_pass,
    instantaneous_frequency,
    is_residue,
    load_csv,
    log_transform,
    low_pass,
    mode_spectrum_means,
    naive_benchmark,
    robust_lowess,
    rolling_mse,
    save_csv,
    sift,
    unwrap_phase,
    walk_forward,
    walk_forward_lags,
    walk_forward_step,
    window,
    zero_crossings,
)

__version__ = "0.1.0"
