#include "fairuc/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairuc {

EnergyVector total_power(const Grid& outputs,
                         const std::optional<BinaryGrid>& mask) {
  if (mask && mask->size() != outputs.size()) {
    throw std::invalid_argument("curtailment mask and outputs differ in PV count");
  }
  EnergyVector s(outputs.size(), 0.0);
  for (size_t l = 0; l < outputs.size(); ++l) {
    if (mask && (*mask)[l].size() != outputs[l].size()) {
      throw std::invalid_argument("curtailment mask and outputs differ in length");
    }
    for (size_t t = 0; t < outputs[l].size(); ++t) {
      if (!mask || !(*mask)[l][t]) s[l] += outputs[l][t];
    }
  }
  return s;
}

double l1_deviation(const EnergyVector& s) {
  if (s.empty()) throw std::invalid_argument("L1 deviation of an empty vector");
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  double d = 0.0;
  for (double v : s) d += std::abs(mean - v);
  return d;
}

double gini_index(const EnergyVector& s) {
  if (s.empty()) throw std::invalid_argument("Gini index of an empty vector");
  EnergyVector sorted = s;
  std::sort(sorted.begin(), sorted.end());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (!(total > 0.0)) throw GiniUndefined();
  const double n = static_cast<double>(sorted.size());
  double g = 0.0, cum = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    cum += sorted[i];
    g += static_cast<double>(i + 1) / n - cum / total;
  }
  return g;
}

double gini_index_normalized(const EnergyVector& s) {
  if (s.size() < 2) throw std::invalid_argument("normalized Gini needs N >= 2");
  return gini_index(s) / ((static_cast<double>(s.size()) - 1.0) / 2.0);
}

}  // namespace fairuc
