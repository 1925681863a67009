#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fairuc/fairness.hpp"

namespace fairuc {
namespace {

TEST(TotalPower, MaskedSum) {
  EXPECT_EQ(total_power({{1, 2, 3}}, BinaryGrid{{0, 1, 0}}), EnergyVector{4});
  EXPECT_EQ(total_power({{1, 2, 3}}), EnergyVector{6});
  EXPECT_EQ(total_power({{0, 0}, {0, 0}}), (EnergyVector{0, 0}));
  EXPECT_EQ(total_power({{5, 7}}, BinaryGrid{{1, 1}}), EnergyVector{0});
}

TEST(TotalPower, ShapeMismatchThrows) {
  EXPECT_THROW(total_power({{1, 2}}, BinaryGrid{{0}}), std::invalid_argument);
  EXPECT_THROW(total_power({{1, 2}}, BinaryGrid{{0, 0}, {0, 0}}), std::invalid_argument);
}

TEST(L1Deviation, Examples) {
  EXPECT_DOUBLE_EQ(l1_deviation({4, 4, 4}), 0.0);
  EXPECT_DOUBLE_EQ(l1_deviation({0, 6}), 6.0);
  EXPECT_DOUBLE_EQ(l1_deviation({1, 2, 3}), 2.0);
  EXPECT_THROW(l1_deviation({}), std::invalid_argument);
}

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(gini_index({5, 5, 5, 5}), 0.0);
  EXPECT_NEAR(gini_index({0, 0, 7}), 1.0, 1e-15);
  EXPECT_NEAR(gini_index({1, 2, 3}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(gini_index_normalized({0, 0, 0, 2}), 1.0, 1e-15);
  EXPECT_THROW(gini_index({0, 0, 0}), GiniUndefined);
  EXPECT_THROW(gini_index({}), std::invalid_argument);
}

TEST(Gini, RandomInvariants) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::uniform_int_distribution<int> len(1, 9);
  for (int trial = 0; trial < 1000; ++trial) {
    EnergyVector s(len(rng));
    for (double& v : s) v = u(rng);
    const double g = gini_index(s);
    const double n = static_cast<double>(s.size());
    EXPECT_GE(g, -1e-15);
    EXPECT_LE(g, (n - 1.0) / 2.0 + 1e-12);

    EnergyVector shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(gini_index(shuffled), g);

    const double c = std::exp(std::uniform_real_distribution<double>(-5.0, 5.0)(rng));
    EnergyVector scaled = s;
    for (double& v : scaled) v *= c;
    EXPECT_NEAR(gini_index(scaled), g, 1e-12);

    EXPECT_EQ(l1_deviation(s) == 0.0, g == 0.0 || s.size() == 1);
  }
}

TEST(Gini, FullConcentrationIsMaximal) {
  for (int n = 1; n <= 8; ++n) {
    EnergyVector s(n, 0.0);
    s.back() = 3.5;
    EXPECT_NEAR(gini_index(s), (n - 1) / 2.0, 1e-12);
  }
}

}  // namespace
}  // namespace fairuc
