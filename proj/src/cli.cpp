#include "hht/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hht/filters.hpp"

namespace hht {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument(key + ": invalid value '" + value + "'");
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) bad_value(key, value);
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    } catch (const std::out_of_range&) {
        bad_value(key, value);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) bad_value(key, value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

const char* command_name(Command c) {
    switch (c) {
        case Command::Decompose: return "decompose";
        case Command::Spectrum: return "spectrum";
        case Command::Reconstruct: return "reconstruct";
        case Command::Features: return "features";
        case Command::Forecast: return "forecast";
        case Command::EndEffect: return "endeffect";
    }
    return "?";
}

const char* method_name(DecompMethod m) {
    switch (m) {
        case DecompMethod::Emd: return "emd";
        case DecompMethod::Eemd: return "eemd";
        case DecompMethod::Ceemd: return "ceemd";
    }
    return "?";
}

std::string selector_modes_string(const FeatureSetSelector& s) {
    switch (s.subset) {
        case ModeSubset::All: return "all";
        case ModeSubset::FirstK: return "first:" + std::to_string(s.k);
        case ModeSubset::LastK: return "last:" + std::to_string(s.k);
    }
    return "?";
}

Decomposition decompose_with(const RunConfig& cfg, const TimeSeries& series) {
    EnsembleConfig ens = cfg.ensemble;
    ens.seed = cfg.seed.value_or(0);
    switch (cfg.method) {
        case DecompMethod::Emd: return emd(series, cfg.ensemble.sift);
        case DecompMethod::Eemd: return eemd(series, ens);
        case DecompMethod::Ceemd: return ceemd(series, ens);
    }
    throw std::logic_error("unreachable");
}

TimeSeries load_input(const RunConfig& cfg) {
    TimeSeries series = load_csv(cfg.input_path, cfg.value_column, cfg.timestamp_column);
    if (cfg.log_price) series = log_transform(series);
    return series;
}

void write_value_csv(const std::vector<double>& values, const std::string& path,
                     const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "t,value\n";
    for (std::size_t t = 0; t < values.size(); ++t)
        out << (t + 1) << "," << format_double(values[t]) << "\n";
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") cfg.input_path = value;
    else if (key == "output") cfg.output_path = value;
    else if (key == "value_column") cfg.value_column = value;
    else if (key == "timestamp_column") cfg.timestamp_column = value;
    else if (key == "log_price") cfg.log_price = parse_bool(key, value);
    else if (key == "method") {
        if (value == "emd") cfg.method = DecompMethod::Emd;
        else if (value == "eemd") cfg.method = DecompMethod::Eemd;
        else if (value == "ceemd") cfg.method = DecompMethod::Ceemd;
        else bad_value(key, value);
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "ensemble.trials") {
        cfg.ensemble.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "ensemble.noise_sigma") {
        cfg.ensemble.noise_sigma = parse_real(key, value);
    } else if (key == "ensemble.target_modes") {
        cfg.ensemble.target_modes = static_cast<int>(parse_int(key, value));
    } else if (key == "sift.sd_threshold") {
        cfg.ensemble.sift.sd_threshold = parse_real(key, value);
    } else if (key == "sift.max_sift_iterations") {
        cfg.ensemble.sift.max_sift_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "sift.max_modes") {
        cfg.ensemble.sift.max_modes = static_cast<int>(parse_int(key, value));
    } else if (key == "lowess.span") {
        cfg.lowess.span = parse_real(key, value);
    } else if (key == "lowess.robust_iterations") {
        cfg.lowess.robust_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "features.imf") {
        cfg.selector.include_imf = parse_bool(key, value);
    } else if (key == "features.hilbert") {
        cfg.selector.include_hilbert = parse_bool(key, value);
    } else if (key == "features.amplitude") {
        cfg.selector.include_amplitude = parse_bool(key, value);
    } else if (key == "features.frequency") {
        cfg.selector.include_frequency = parse_bool(key, value);
    } else if (key == "features.lambda") {
        cfg.selector.include_lambda = parse_bool(key, value);
    } else if (key == "features.modes") {
        if (value == "all") {
            cfg.selector.subset = ModeSubset::All;
            cfg.selector.k = 0;
        } else if (value.rfind("first:", 0) == 0) {
            cfg.selector.subset = ModeSubset::FirstK;
            cfg.selector.k = static_cast<int>(parse_int(key, value.substr(6)));
        } else if (value.rfind("last:", 0) == 0) {
            cfg.selector.subset = ModeSubset::LastK;
            cfg.selector.k = static_cast<int>(parse_int(key, value.substr(5)));
        } else {
            bad_value(key, value);
        }
    } else if (key == "features.t_first") {
        cfg.t_first = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "features.t_last") {
        cfg.t_last = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "forecast.tau") {
        cfg.tau = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "forecast.t1") {
        cfg.forecast_t1 = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "forecast.t2") {
        cfg.forecast_t2 = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "forecast.t_window") {
        cfg.train_window = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "forecast.split_protocol") {
        cfg.split_protocol = parse_bool(key, value);
    } else if (key == "forecast.fast_approximate") {
        cfg.fast_approximate = parse_bool(key, value);
    } else if (key == "forecast.reg") {
        if (value == "gcv") cfg.ridge_reg.reset();
        else cfg.ridge_reg = parse_real(key, value);
    } else if (key == "reconstruct.cutoff") {
        cfg.cutoff_mode = static_cast<int>(parse_int(key, value));
    } else if (key == "reconstruct.pass") {
        if (value == "low") cfg.pass = PassKind::Low;
        else if (value == "high") cfg.pass = PassKind::High;
        else bad_value(key, value);
    } else if (key == "endeffect.replications") {
        cfg.replications = static_cast<int>(parse_int(key, value));
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open file '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> errors;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };

    need(!cfg.input_path.empty(), "input: required");
    need(!cfg.output_path.empty(), "output: required");
    need(cfg.ensemble.trials >= 1, "ensemble.trials: must be >= 1");
    need(cfg.ensemble.noise_sigma > 0.0, "ensemble.noise_sigma: must be > 0");
    need(cfg.ensemble.target_modes >= 0, "ensemble.target_modes: must be >= 0");
    need(cfg.ensemble.sift.sd_threshold > 0.0, "sift.sd_threshold: must be > 0");
    need(cfg.ensemble.sift.max_sift_iterations >= 1, "sift.max_sift_iterations: must be >= 1");
    need(cfg.ensemble.sift.max_modes >= 0, "sift.max_modes: must be >= 0");
    need(cfg.lowess.span > 0.0 && cfg.lowess.span <= 1.0, "lowess.span: must lie in (0, 1]");
    need(cfg.lowess.robust_iterations >= 0, "lowess.robust_iterations: must be >= 0");

    const bool uses_noise = cfg.method != DecompMethod::Emd;
    if (uses_noise && !cfg.seed.has_value())
        errors.push_back("seed: required for noise-assisted commands");

    const bool selector_used =
        cfg.command == Command::Features || cfg.command == Command::Forecast;
    if (selector_used) {
        need(cfg.selector.include_imf || cfg.selector.include_hilbert ||
                 cfg.selector.include_amplitude || cfg.selector.include_frequency ||
                 cfg.selector.include_lambda,
             "features: at least one feature kind must be selected");
        if (cfg.selector.subset != ModeSubset::All)
            need(cfg.selector.k >= 1, "features.modes: k must be >= 1");
        need(cfg.tau >= 1, "forecast.tau: must be >= 1");
    }
    if (cfg.command == Command::Forecast) {
        need(cfg.forecast_t1 >= 1, "forecast.t1: must be >= 1");
        need(cfg.forecast_t2 >= 1, "forecast.t2: must be >= 1");
        if (!cfg.split_protocol)
            need(cfg.train_window == 0 || cfg.train_window >= cfg.tau + 3,
                 "forecast.t_window: must be >= tau + 3");
        if (cfg.ridge_reg) need(*cfg.ridge_reg >= 0.0, "forecast.reg: must be >= 0");
    }
    if (cfg.command == Command::Reconstruct)
        need(cfg.cutoff_mode >= 1, "reconstruct.cutoff: must be >= 1");
    if (cfg.command == Command::EndEffect)
        need(cfg.replications >= 1, "endeffect.replications: must be >= 1");
    return errors;
}

std::string canonical_config(const RunConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["command"] = command_name(cfg.command);
    kv["input"] = cfg.input_path;
    kv["output"] = cfg.output_path;
    kv["value_column"] = cfg.value_column;
    kv["timestamp_column"] = cfg.timestamp_column;
    kv["log_price"] = cfg.log_price ? "true" : "false";
    kv["method"] = method_name(cfg.method);
    kv["seed"] = cfg.seed ? std::to_string(*cfg.seed) : "";
    kv["ensemble.trials"] = std::to_string(cfg.ensemble.trials);
    kv["ensemble.noise_sigma"] = format_double(cfg.ensemble.noise_sigma);
    kv["ensemble.target_modes"] = std::to_string(cfg.ensemble.target_modes);
    kv["sift.sd_threshold"] = format_double(cfg.ensemble.sift.sd_threshold);
    kv["sift.max_sift_iterations"] = std::to_string(cfg.ensemble.sift.max_sift_iterations);
    kv["sift.max_modes"] = std::to_string(cfg.ensemble.sift.max_modes);
    kv["lowess.span"] = format_double(cfg.lowess.span);
    kv["lowess.robust_iterations"] = std::to_string(cfg.lowess.robust_iterations);
    kv["features.imf"] = cfg.selector.include_imf ? "true" : "false";
    kv["features.hilbert"] = cfg.selector.include_hilbert ? "true" : "false";
    kv["features.amplitude"] = cfg.selector.include_amplitude ? "true" : "false";
    kv["features.frequency"] = cfg.selector.include_frequency ? "true" : "false";
    kv["features.lambda"] = cfg.selector.include_lambda ? "true" : "false";
    kv["features.modes"] = selector_modes_string(cfg.selector);
    kv["features.t_first"] = cfg.t_first ? std::to_string(*cfg.t_first) : "";
    kv["features.t_last"] = cfg.t_last ? std::to_string(*cfg.t_last) : "";
    kv["forecast.tau"] = std::to_string(cfg.tau);
    kv["forecast.t1"] = std::to_string(cfg.forecast_t1);
    kv["forecast.t2"] = std::to_string(cfg.forecast_t2);
    kv["forecast.t_window"] = std::to_string(cfg.train_window);
    kv["forecast.split_protocol"] = cfg.split_protocol ? "true" : "false";
    kv["forecast.fast_approximate"] = cfg.fast_approximate ? "true" : "false";
    kv["forecast.reg"] = cfg.ridge_reg ? format_double(*cfg.ridge_reg) : "gcv";
    kv["reconstruct.cutoff"] = std::to_string(cfg.cutoff_mode);
    kv["reconstruct.pass"] = cfg.pass == PassKind::Low ? "low" : "high";
    kv["endeffect.replications"] = std::to_string(cfg.replications);

    std::ostringstream out;
    for (const auto& [key, value] : kv) out << key << " = " << value << "\n";
    return out.str();
}

std::string config_digest(const RunConfig& cfg) {
    const std::string canon = canonical_config(cfg);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const unsigned char c : canon) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

int run(const RunConfig& cfg) {
    const auto errors = validate(cfg);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "error: " << e << "\n";
        return kExitValidation;
    }
    const std::string digest = "config=" + config_digest(cfg);

    try {
        switch (cfg.command) {
            case Command::Decompose: {
                const TimeSeries series = load_input(cfg);
                const Decomposition decomp = decompose_with(cfg, series);
                save_csv(decomp, cfg.output_path, digest);
                break;
            }
            case Command::Spectrum: {
                const TimeSeries series = load_input(cfg);
                const Decomposition decomp = decompose_with(cfg, series);
                const auto points = hilbert_spectrum(decomp, cfg.lowess);
                save_csv(points, cfg.output_path, digest);
                const auto means = mode_spectrum_means(points);
                save_csv(means, with_suffix(cfg.output_path, "_means"), digest);
                break;
            }
            case Command::Reconstruct: {
                const TimeSeries series = load_input(cfg);
                const Decomposition decomp = decompose_with(cfg, series);
                std::vector<double> values = cfg.pass == PassKind::Low
                                                 ? low_pass(decomp, cfg.cutoff_mode)
                                                 : high_pass(decomp, cfg.cutoff_mode);
                if (cfg.log_price)
                    for (double& v : values) v = std::exp(v);
                write_value_csv(values, cfg.output_path, digest);
                break;
            }
            case Command::Features: {
                const TimeSeries series = load_input(cfg);
                const std::size_t t_first = cfg.t_first.value_or(cfg.tau - 1);
                const std::size_t t_last = cfg.t_last.value_or(series.size() - 2);
                EnsembleConfig ens = cfg.ensemble;
                ens.seed = cfg.seed.value_or(0);
                const FeatureMatrix m = build_dataset(series, t_first, t_last, cfg.tau,
                                                      cfg.selector, ens, cfg.lowess);
                save_csv(m, cfg.output_path, digest);
                break;
            }
            case Command::Forecast: {
                const TimeSeries series = load_input(cfg);
                EnsembleConfig ens = cfg.ensemble;
                ens.seed = cfg.seed.value_or(0);
                const RidgeRegressor regressor =
                    cfg.ridge_reg ? RidgeRegressor(*cfg.ridge_reg) : RidgeRegressor();
                ForecastReport report;
                std::vector<std::pair<std::string, double>> extra;
                if (cfg.split_protocol) {
                    report = evaluate_split(series, cfg.forecast_t1, cfg.forecast_t2, cfg.tau,
                                            cfg.selector, ens, cfg.lowess, regressor);
                } else {
                    const std::size_t window =
                        cfg.train_window > 0 ? cfg.train_window : cfg.forecast_t1;
                    report = walk_forward(series, cfg.forecast_t1, cfg.forecast_t2, window,
                                          cfg.tau, cfg.selector, ens, cfg.lowess, regressor,
                                          cfg.fast_approximate);
                    const ForecastReport plain = walk_forward_lags(
                        series, cfg.forecast_t1, cfg.forecast_t2, window, cfg.tau, regressor);
                    extra.emplace_back("plain_lag_mse", plain.mse);
                    extra.emplace_back("hht_to_plain_ratio",
                                       plain.mse > 0.0 ? report.mse / plain.mse : 0.0);
                }
                save_json(report, cfg.output_path + ".json", config_digest(cfg), extra);
                save_csv(report, cfg.output_path + ".csv", digest);
                break;
            }
            case Command::EndEffect: {
                // Every non-timestamp column of the input is one truth component.
                std::ifstream in(cfg.input_path);
                if (!in) throw std::runtime_error("cannot open file: " + cfg.input_path);
                std::string header;
                if (!std::getline(in, header))
                    throw std::runtime_error("empty file: " + cfg.input_path);
                in.close();
                std::vector<std::string> columns;
                {
                    std::stringstream ss(header);
                    std::string col;
                    while (std::getline(ss, col, ',')) {
                        if (!col.empty() && col.back() == '\r') col.pop_back();
                        if (col == "t" || col == cfg.timestamp_column) continue;
                        columns.push_back(col);
                    }
                }
                if (columns.empty())
                    throw std::runtime_error("endeffect: no component columns in input");
                std::vector<std::vector<double>> truth;
                for (const auto& col : columns)
                    truth.push_back(load_csv(cfg.input_path, col).values);
                EnsembleConfig ens = cfg.ensemble;
                ens.seed = cfg.seed.value_or(0);
                const auto report = characterize_end_effect(truth, ens, cfg.replications);
                save_csv(report, cfg.output_path, digest);
                break;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << command_name(cfg.command) << ": " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace hht
