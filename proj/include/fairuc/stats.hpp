#pragma once

#include <string>
#include <vector>

namespace fairuc {

struct TestResult {
  std::string test;
  std::string null_hypothesis;
  double statistic = 0.0;
  double p_value = 1.0;
};

double mean(const std::vector<double>& x);
/// Sample standard deviation (n − 1 denominator).
double sample_std(const std::vector<double>& x);

/// W statistic with the Royston (AS R94) p-value; 3 <= n <= 5000.
TestResult shapiro_wilk(const std::vector<double>& x);

/// F = var(a)/var(b), two-sided p from F(n_a − 1, n_b − 1).
TestResult f_test(const std::vector<double>& a, const std::vector<double>& b);

/// Pooled-variance Student t, two-sided p from t(n_a + n_b − 2).
TestResult t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fairuc
