#include "hht/time_series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hht {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

TimeSeries load_csv(const std::string& path, const std::string& value_column,
                    const std::string& timestamp_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    strip_cr(line);
    const auto header = split_csv_line(line);

    auto column_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("missing column '" + name + "' in " + path);
    };

    const std::size_t value_idx = column_index(value_column);
    std::size_t ts_idx = 0;
    const bool with_ts = !timestamp_column.empty();
    if (with_ts) ts_idx = column_index(timestamp_column);

    TimeSeries series;
    series.name = value_column;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        ++row;
        const auto fields = split_csv_line(line);
        if (value_idx >= fields.size() || (with_ts && ts_idx >= fields.size()))
            throw std::runtime_error("row " + std::to_string(row) + ": too few fields");

        const std::string& cell = fields[value_idx];
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0' || !std::isfinite(v))
            throw std::runtime_error("row " + std::to_string(row) +
                                     ": non-numeric or non-finite value '" + cell + "'");
        series.values.push_back(v);
        if (with_ts) {
            const std::string& ts = fields[ts_idx];
            if (!series.timestamps.empty() && ts <= series.timestamps.back())
                throw std::runtime_error("row " + std::to_string(row) +
                                         ": timestamps not strictly increasing ('" + ts + "')");
            series.timestamps.push_back(ts);
        }
    }
    if (series.values.empty()) throw std::runtime_error("no data rows in " + path);
    return series;
}

void save_csv(const TimeSeries& series, const std::string& path,
              const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    const bool with_ts = !series.timestamps.empty();
    if (with_ts) out << "timestamp,";
    out << (series.name.empty() ? "value" : series.name) << "\n";
    for (std::size_t t = 0; t < series.values.size(); ++t) {
        if (with_ts) out << series.timestamps[t] << ",";
        out << format_double(series.values[t]) << "\n";
    }
}

TimeSeries log_transform(const TimeSeries& series) {
    TimeSeries out = series;
    for (std::size_t t = 0; t < series.values.size(); ++t) {
        if (!(series.values[t] > 0.0))
            throw std::invalid_argument("log_transform: nonpositive value at index " +
                                        std::to_string(t));
        out.values[t] = std::log(series.values[t]);
    }
    return out;
}

std::vector<double> window(std::span<const double> values, std::size_t t, std::size_t tau) {
    if (tau == 0 || t >= values.size() || t + 1 < tau)
        throw std::invalid_argument("window out of range: t=" + std::to_string(t) +
                                    " tau=" + std::to_string(tau) +
                                    " T=" + std::to_string(values.size()));
    return {values.begin() + static_cast<std::ptrdiff_t>(t + 1 - tau),
            values.begin() + static_cast<std::ptrdiff_t>(t + 1)};
}

std::vector<double> window(const TimeSeries& series, std::size_t t, std::size_t tau) {
    return window(std::span<const double>(series.values), t, tau);
}

}  // namespace hht
