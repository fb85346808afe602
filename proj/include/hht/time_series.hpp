#ifndef HHT_TIME_SERIES_HPP
#define HHT_TIME_SERIES_HPP

#include <span>
#include <string>
#include <vector>

namespace hht {

/// Uniformly sampled series. Timestamps, when present, are ordered labels
/// only; all numeric work treats the sample index as the clock (dt = 1).
struct TimeSeries {
    std::vector<double> values;
    std::vector<std::string> timestamps;  // empty, or one label per value
    std::string name;

    std::size_t size() const { return values.size(); }
};

/// Read a series from a headered CSV. Values must parse as finite reals;
/// timestamps (optional column) must be strictly increasing. Errors carry
/// the 1-based data row index.
TimeSeries load_csv(const std::string& path, const std::string& value_column,
                    const std::string& timestamp_column = "");

/// Write the series back out (value column, plus timestamp column when
/// present). Round-trips values bit-exactly through load_csv.
void save_csv(const TimeSeries& series, const std::string& path,
              const std::string& header_comment = "");

/// Element-wise natural log; requires strictly positive values.
TimeSeries log_transform(const TimeSeries& series);

/// The lookback window (x(t-tau+1), ..., x(t)), chronological order.
std::vector<double> window(std::span<const double> values, std::size_t t, std::size_t tau);
std::vector<double> window(const TimeSeries& series, std::size_t t, std::size_t tau);

/// Format a double with full round-trip precision (shortest form is not
/// required; output is deterministic across runs).
std::string format_double(double v);

}  // namespace hht

#endif
