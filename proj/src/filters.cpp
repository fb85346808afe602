#include "hht/filters.hpp"

#include <stdexcept>
#include <string>

namespace hht {

namespace {

void check_cutoff(const Decomposition& decomp, int m) {
    if (m < 1 || static_cast<std::size_t>(m) > decomp.mode_count())
        throw std::invalid_argument("cutoff mode " + std::to_string(m) +
                                    " out of range [1, " +
                                    std::to_string(decomp.mode_count()) + "]");
}

}  // namespace

std::vector<double> low_pass(const Decomposition& decomp, int cutoff_mode) {
    check_cutoff(decomp, cutoff_mode);
    std::vector<double> out = decomp.residue;
    for (std::size_t j = static_cast<std::size_t>(cutoff_mode) - 1; j < decomp.mode_count(); ++j)
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += decomp.imfs[j].values[t];
    return out;
}

std::vector<double> high_pass(const Decomposition& decomp, int cutoff_mode) {
    check_cutoff(decomp, cutoff_mode);
    std::vector<double> out(decomp.residue.size(), 0.0);
    for (std::size_t j = 0; j < static_cast<std::size_t>(cutoff_mode); ++j)
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += decomp.imfs[j].values[t];
    return out;
}

}  // namespace hht
