#ifndef HHT_CLI_HPP
#define HHT_CLI_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hht/ceemd.hpp"
#include "hht/features.hpp"
#include "hht/forecast.hpp"
#include "hht/hsa.hpp"

namespace hht {

enum class Command { Decompose, Spectrum, Reconstruct, Features, Forecast, EndEffect };
enum class DecompMethod { Emd, Eemd, Ceemd };
enum class PassKind { Low, High };

/// Everything one run needs. Values come from built-in defaults, then the
/// config file, then command-line flags, in that order.
struct RunConfig {
    Command command = Command::Decompose;
    std::string input_path;
    std::string output_path;
    std::string value_column = "value";
    std::string timestamp_column;
    bool log_price = false;

    DecompMethod method = DecompMethod::Ceemd;
    std::optional<std::uint64_t> seed;  // mandatory for noise-assisted methods
    EnsembleConfig ensemble{};
    LowessConfig lowess{};
    FeatureSetSelector selector{};

    // reconstruct
    int cutoff_mode = 1;
    PassKind pass = PassKind::Low;

    // features / forecast
    std::size_t tau = 5;
    std::optional<std::size_t> t_first;  // features row range (0-based)
    std::optional<std::size_t> t_last;
    std::size_t forecast_t1 = 0;        // training length / first test index
    std::size_t forecast_t2 = 0;        // number of test steps
    std::size_t train_window = 0;       // 0 = use forecast_t1 (split protocol)
    bool split_protocol = false;        // evaluate_split instead of walk_forward
    bool fast_approximate = false;      // cached decomposition walk-forward
    std::optional<double> ridge_reg;    // unset = GCV

    // endeffect
    int replications = 20;
};

/// Exit codes: 0 success, 1 validation failure, 2 runtime failure.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

/// Parse a flat key = value document (dotted keys, # comments) into the
/// config. Unknown keys are an error naming the key.
void apply_config_file(RunConfig& config, const std::string& path);

/// Set one dotted key; throws std::invalid_argument naming the key on bad
/// values. Shared by the file loader and the flag layer.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// Validation errors, each naming the offending field (e.g. "lowess.span").
std::vector<std::string> validate(const RunConfig& config);

/// Canonical key = value rendering of the full config (sorted keys).
std::string canonical_config(const RunConfig& config);

/// FNV-1a 64-bit digest of the canonical config, as 16 hex chars. Written
/// into every output file so runs are attributable to their exact config.
std::string config_digest(const RunConfig& config);

/// Execute the command; writes output files, reports errors on stderr.
int run(const RunConfig& config);

}  // namespace hht

#endif
