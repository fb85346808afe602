// hht: CEEMD + Hilbert-Huang analysis of time series.
//
// Subcommands: decompose, spectrum, reconstruct, features, forecast,
// endeffect. Values come from defaults, then --config file entries, then
// flags, in that order. Exit codes: 0 ok, 1 validation, 2 runtime.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "hht/cli.hpp"

namespace {

struct FlagCapture {
    std::vector<std::pair<std::string, std::string>> entries;

    // Register a flag that records "key = value" for the config layer.
    void add(CLI::App* app, const std::string& flag, const std::string& key,
             const std::string& help) {
        app->add_option_function<std::string>(
               flag,
               [this, key](const std::string& value) { entries.emplace_back(key, value); },
               help);
    }
};

void register_common(CLI::App* cmd, FlagCapture& flags, std::string& config_path) {
    cmd->add_option("--config", config_path, "key = value config file (flags override)");
    flags.add(cmd, "--input,-i", "input", "input CSV path");
    flags.add(cmd, "--output,-o", "output", "output path (stem for multi-file commands)");
    flags.add(cmd, "--value-column", "value_column", "name of the value column");
    flags.add(cmd, "--timestamp-column", "timestamp_column", "optional timestamp column");
    flags.add(cmd, "--log-price", "log_price", "work on log(values) (true/false)");
    flags.add(cmd, "--method", "method", "decomposition method: emd | eemd | ceemd");
    flags.add(cmd, "--seed", "seed", "RNG seed (required for eemd/ceemd)");
    flags.add(cmd, "--trials", "ensemble.trials", "ensemble size N");
    flags.add(cmd, "--noise-sigma", "ensemble.noise_sigma",
              "noise std as a fraction of the input std");
    flags.add(cmd, "--target-modes", "ensemble.target_modes",
              "fixed mode count across trials (0 = pilot EMD decides)");
    flags.add(cmd, "--sd-threshold", "sift.sd_threshold", "sifting SD stop threshold");
    flags.add(cmd, "--max-sift-iterations", "sift.max_sift_iterations", "sift iteration cap");
    flags.add(cmd, "--max-modes", "sift.max_modes", "IMF count cap (0 = unlimited)");
    flags.add(cmd, "--span", "lowess.span", "LOWESS span fraction");
    flags.add(cmd, "--robust-iterations", "lowess.robust_iterations",
              "LOWESS robustness rounds");
}

void register_selector(CLI::App* cmd, FlagCapture& flags) {
    flags.add(cmd, "--with-imf", "features.imf", "include IMF values c (true/false)");
    flags.add(cmd, "--with-hilbert", "features.hilbert", "include Hilbert parts (true/false)");
    flags.add(cmd, "--with-amplitude", "features.amplitude", "include amplitudes (true/false)");
    flags.add(cmd, "--with-frequency", "features.frequency", "include frequencies (true/false)");
    flags.add(cmd, "--with-lambda", "features.lambda", "include end-effect factor (true/false)");
    flags.add(cmd, "--modes", "features.modes", "mode subset: all | first:k | last:k");
    flags.add(cmd, "--tau", "forecast.tau", "lookback window length");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CEEMD + Hilbert-Huang transform toolkit"};
    app.require_subcommand(1);

    struct SubSpec {
        hht::Command command;
        CLI::App* cmd;
        FlagCapture flags;
        std::string config_path;
    };
    std::vector<SubSpec> subs;
    subs.reserve(6);

    auto make = [&](hht::Command c, const char* name, const char* help) -> SubSpec& {
        subs.push_back({c, app.add_subcommand(name, help), {}, {}});
        SubSpec& spec = subs.back();
        register_common(spec.cmd, spec.flags, spec.config_path);
        return spec;
    };

    make(hht::Command::Decompose, "decompose", "decompose a series into IMFs + residue");
    make(hht::Command::Spectrum, "spectrum",
         "emit the Hilbert energy-frequency spectrum and per-mode means");
    {
        auto& spec = make(hht::Command::Reconstruct, "reconstruct",
                          "mode-filtered reconstruction (low/high pass)");
        spec.flags.add(spec.cmd, "--cutoff", "reconstruct.cutoff", "mode cutoff m (1-based)");
        spec.flags.add(spec.cmd, "--pass", "reconstruct.pass", "low | high");
    }
    {
        auto& spec = make(hht::Command::Features, "features", "emit the HHT feature matrix");
        register_selector(spec.cmd, spec.flags);
        spec.flags.add(spec.cmd, "--t-first", "features.t_first", "first row time (0-based)");
        spec.flags.add(spec.cmd, "--t-last", "features.t_last", "last row time (0-based)");
    }
    {
        auto& spec = make(hht::Command::Forecast, "forecast",
                          "walk-forward (or split) ridge forecasting with HHT features");
        register_selector(spec.cmd, spec.flags);
        spec.flags.add(spec.cmd, "--t1", "forecast.t1",
                       "first test index (walk-forward) / training length (split)");
        spec.flags.add(spec.cmd, "--t2", "forecast.t2", "number of test steps");
        spec.flags.add(spec.cmd, "--t-window", "forecast.t_window",
                       "training window length (0 = t1)");
        spec.flags.add(spec.cmd, "--split-protocol", "forecast.split_protocol",
                       "single-decomposition train/test split instead of walk-forward");
        spec.flags.add(spec.cmd, "--fast-approximate", "forecast.fast_approximate",
                       "cached-decomposition walk-forward (faster, not leakage-free)");
        spec.flags.add(spec.cmd, "--reg", "forecast.reg", "ridge regularization, or 'gcv'");
    }
    {
        auto& spec = make(hht::Command::EndEffect, "endeffect",
                          "empirical end-effect error report from known components");
        spec.flags.add(spec.cmd, "--replications", "endeffect.replications",
                       "number of decomposition replications");
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& spec : subs) {
        if (!spec.cmd->parsed()) continue;
        hht::RunConfig config;
        config.command = spec.command;
        try {
            if (!spec.config_path.empty()) hht::apply_config_file(config, spec.config_path);
            for (const auto& [key, value] : spec.flags.entries)
                hht::apply_config_entry(config, key, value);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return hht::kExitValidation;
        }
        return hht::run(config);
    }
    return hht::kExitValidation;
}
