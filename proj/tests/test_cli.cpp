#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "hht/cli.hpp"

using namespace hht;
using namespace hht::testing;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_series_csv(const std::string& path, const std::vector<double>& values) {
    std::ofstream out(path);
    out << "value\n";
    for (const double v : values) out << format_double(v) << "\n";
}

struct CliFixture {
    std::string input = "/tmp/hht_cli_input.csv";
    std::vector<std::string> cleanup{input};

    CliFixture() { write_series_csv(input, make_two_tone(300)); }
    ~CliFixture() {
        for (const auto& p : cleanup) std::remove(p.c_str());
    }
    std::string out(const std::string& name) {
        const std::string path = "/tmp/hht_cli_" + name;
        cleanup.push_back(path);
        return path;
    }
};

RunConfig base_config(CliFixture& fx, Command cmd, const std::string& out_name) {
    RunConfig cfg;
    cfg.command = cmd;
    cfg.input_path = fx.input;
    cfg.output_path = fx.out(out_name);
    cfg.seed = 42;
    cfg.ensemble.trials = 2;
    return cfg;
}

}  // namespace

TEST_CASE("decompose output columns sum row-wise to the input") {
    CliFixture fx;
    RunConfig cfg = base_config(fx, Command::Decompose, "decomp.csv");
    REQUIRE(run(cfg) == kExitOk);

    const auto series = make_two_tone(300);
    std::ifstream in(cfg.output_path);
    std::string line;
    std::getline(in, line);  // digest comment
    CHECK(line.rfind("# config=", 0) == 0);
    std::getline(in, line);  // header
    std::size_t t = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // t column
        double sum = 0.0;
        while (std::getline(ss, cell, ',')) sum += std::stod(cell);
        CHECK(std::abs(sum - series[t]) < 1e-8 * 1.8);
        ++t;
    }
    CHECK(t == 300);
}

TEST_CASE("same config and seed produce byte-identical outputs") {
    CliFixture fx;
    RunConfig cfg = base_config(fx, Command::Decompose, "rep1.csv");
    REQUIRE(run(cfg) == kExitOk);
    const std::string first = slurp(cfg.output_path);
    RunConfig cfg2 = cfg;
    REQUIRE(run(cfg2) == kExitOk);
    CHECK(slurp(cfg.output_path) == first);
}

TEST_CASE("validation failure names the offending field and exits 1") {
    CliFixture fx;
    RunConfig cfg = base_config(fx, Command::Decompose, "bad.csv");
    cfg.lowess.span = 1.5;
    CHECK(run(cfg) == kExitValidation);
    const auto errors = validate(cfg);
    bool named = false;
    for (const auto& e : errors) named = named || e.find("lowess.span") != std::string::npos;
    CHECK(named);
}

TEST_CASE("seed is mandatory for noise-assisted methods only") {
    CliFixture fx;
    RunConfig cfg = base_config(fx, Command::Decompose, "seed.csv");
    cfg.seed.reset();
    CHECK(run(cfg) == kExitValidation);
    cfg.method = DecompMethod::Emd;
    CHECK(run(cfg) == kExitOk);
}

TEST_CASE("spectrum command writes points and per-mode means") {
    CliFixture fx;
    RunConfig cfg = base_config(fx, Command::Spectrum, "spec.csv");
    REQUIRE(run(cfg) == kExitOk);
    const std::string points = slurp(cfg.output_path);
    CHECK(points.find("mode,t,frequency,energy,amplitude") != std::string::npos);
    const std::string means = slurp(fx.out("spec_means.csv"));
    CHECK(means.find("mode,mean_frequency,mean_energy") != std::string::npos);
}

TEST_CASE("reconstruct applies the exponential back-transform for log prices") {
    CliFixture fx;
    // strictly positive input so the log transform is defined
    std::vector<double> prices(300);
    const auto base = make_two_tone(300);
    for (std::size_t t = 0; t < prices.size(); ++t) prices[t] = std::exp(0.1 * base[t]) * 100.0;
    write_series_csv(fx.input, prices);

    RunConfig cfg = base_config(fx, Command::Reconstruct, "recon.csv");
    cfg.log_price = true;
    cfg.cutoff_mode = 1;  // full reconstruction: exp(log x) == x
    REQUIRE(run(cfg) == kExitOk);

    std::ifstream in(cfg.output_path);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::size_t t = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        CHECK(std::stod(line.substr(comma + 1)) == doctest::Approx(prices[t]).epsilon(1e-6));
        ++t;
    }
    CHECK(t == 300);
}

TEST_CASE("forecast command emits JSON with both feature-set MSEs and their ratio") {
    CliFixture fx;
    write_series_csv(fx.input, make_ar_seasonal(260, 42));
    RunConfig cfg = base_config(fx, Command::Forecast, "fct");
    fx.cleanup.push_back(cfg.output_path + ".json");
    fx.cleanup.push_back(cfg.output_path + ".csv");
    cfg.forecast_t1 = 200;
    cfg.forecast_t2 = 10;
    cfg.train_window = 128;
    cfg.tau = 5;
    cfg.selector.include_lambda = true;
    REQUIRE(run(cfg) == kExitOk);

    const std::string json = slurp(cfg.output_path + ".json");
    CHECK(json.find("\"mse\"") != std::string::npos);
    CHECK(json.find("\"naive_mse\"") != std::string::npos);
    CHECK(json.find("\"plain_lag_mse\"") != std::string::npos);
    CHECK(json.find("\"hht_to_plain_ratio\"") != std::string::npos);
    CHECK(json.find("\"config_digest\"") != std::string::npos);
    CHECK(json.find("nan") == std::string::npos);
    CHECK(json.find("inf") == std::string::npos);

    const std::string csv = slurp(cfg.output_path + ".csv");
    CHECK(csv.find("step,prediction,actual,squared_error") != std::string::npos);
}

TEST_CASE("forecast outputs are byte-identical across runs (timings excluded)") {
    CliFixture fx;
    write_series_csv(fx.input, make_ar_seasonal(220, 9));
    RunConfig cfg = base_config(fx, Command::Forecast, "rep_fct");
    fx.cleanup.push_back(cfg.output_path + ".json");
    fx.cleanup.push_back(cfg.output_path + ".csv");
    cfg.forecast_t1 = 180;
    cfg.forecast_t2 = 5;
    cfg.train_window = 128;
    cfg.tau = 4;
    REQUIRE(run(cfg) == kExitOk);
    const std::string json1 = slurp(cfg.output_path + ".json");
    const std::string csv1 = slurp(cfg.output_path + ".csv");
    REQUIRE(run(cfg) == kExitOk);
    CHECK(slurp(cfg.output_path + ".json") == json1);
    CHECK(slurp(cfg.output_path + ".csv") == csv1);
}

TEST_CASE("endeffect command reads truth components and writes the report") {
    CliFixture fx;
    const std::string truth_path = fx.out("truth.csv");
    {
        std::ofstream out(truth_path);
        out << "tone_fast,tone_slow\n";
        const auto fast = make_tone(200, 0.2);
        const auto slow = make_tone(200, 0.02, 0.8);
        for (std::size_t t = 0; t < 200; ++t)
            out << format_double(fast[t]) << "," << format_double(slow[t]) << "\n";
    }
    RunConfig cfg = base_config(fx, Command::EndEffect, "endeffect.csv");
    cfg.input_path = truth_path;
    cfg.replications = 3;
    REQUIRE(run(cfg) == kExitOk);
    const std::string report = slurp(cfg.output_path);
    CHECK(report.find("mode,bin_low,bin_high,rmse") != std::string::npos);
    CHECK(report.find("residue") != std::string::npos);
}

TEST_CASE("features command writes named columns") {
    CliFixture fx;
    RunConfig cfg = base_config(fx, Command::Features, "features.csv");
    cfg.tau = 3;
    cfg.selector.include_lambda = true;
    REQUIRE(run(cfg) == kExitOk);
    const std::string body = slurp(cfg.output_path);
    CHECK(body.find("c1_lag2") != std::string::npos);
    CHECK(body.find("lambda,target") != std::string::npos);
}

TEST_CASE("config file parsing, flag overrides, and unknown keys") {
    const std::string path = "/tmp/hht_cli_config.conf";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "lowess.span = 0.1\n";
        out << "ensemble.trials = 7\n";
        out << "features.modes = first:3\n";
    }
    RunConfig cfg;
    apply_config_file(cfg, path);
    CHECK(cfg.lowess.span == 0.1);
    CHECK(cfg.ensemble.trials == 7);
    CHECK(cfg.selector.subset == ModeSubset::FirstK);
    CHECK(cfg.selector.k == 3);

    apply_config_entry(cfg, "ensemble.trials", "9");  // flag layer wins
    CHECK(cfg.ensemble.trials == 9);

    CHECK_THROWS_AS(apply_config_entry(cfg, "no.such.key", "1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_entry(cfg, "lowess.span", "abc"), std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("config digest is stable and covers every field") {
    RunConfig a;
    RunConfig b;
    CHECK(config_digest(a) == config_digest(b));
    b.lowess.span = 0.07;
    CHECK(config_digest(a) != config_digest(b));
    RunConfig c;
    c.seed = 1;
    CHECK(config_digest(a) != config_digest(c));
}
