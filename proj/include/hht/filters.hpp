#ifndef HHT_FILTERS_HPP
#define HHT_FILTERS_HPP

#include <vector>

#include "hht/emd.hpp"

namespace hht {

/// x_L = sum_{j=m..n} c_j + residue. Keeps the slow modes; m = 1 is the
/// full reconstruction. m is 1-based and must lie in [1, n].
std::vector<double> low_pass(const Decomposition& decomp, int cutoff_mode);

/// x_H = sum_{j=1..m} c_j. Keeps the fast modes; m is 1-based in [1, n].
std::vector<double> high_pass(const Decomposition& decomp, int cutoff_mode);

}  // namespace hht

#endif
