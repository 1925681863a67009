#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "fairuc/model.hpp"

namespace fairuc {

/// Delivered energy per PV over the horizon.
using EnergyVector = std::vector<double>;

/// Raised by gini_index when every entry is zero.
class GiniUndefined : public std::domain_error {
 public:
  GiniUndefined() : std::domain_error("Gini index undefined: total energy is zero") {}
};

/// s_l = Σ_t output[l][t]·(1 − mask[l][t]); no mask means nothing curtailed.
EnergyVector total_power(const Grid& outputs,
                         const std::optional<BinaryGrid>& mask = std::nullopt);

/// Σ_j |mean(s) − s_j|.
double l1_deviation(const EnergyVector& s);

/// Σ_i (i/N − cumulative share of the i smallest entries). Unnormalized:
/// the maximum is (N−1)/2, reached when one entry holds all the energy.
double gini_index(const EnergyVector& s);

/// gini_index scaled to [0,1] by dividing by (N−1)/2. Not the quantity the
/// evaluation protocol reports; provided for N ≠ 3 comparisons.
double gini_index_normalized(const EnergyVector& s);

}  // namespace fairuc
