#include "fairuc/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairuc {

double mean(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_std(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("standard deviation needs n >= 2");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

namespace {

double variance(const std::vector<double>& x) {
  const double s = sample_std(x);
  return s * s;
}

double poly(const double* c, int n, double x) {
  double r = c[n - 1];
  for (int i = n - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

}  // namespace

TestResult shapiro_wilk(const std::vector<double>& sample) {
  const int n = static_cast<int>(sample.size());
  if (n < 3 || n > 5000) throw std::invalid_argument("Shapiro-Wilk needs 3 <= n <= 5000");
  std::vector<double> x = sample;
  std::sort(x.begin(), x.end());
  if (x.back() - x.front() <= 1e-300 * std::max(1.0, std::abs(x.back()))) {
    throw std::invalid_argument("Shapiro-Wilk undefined for a constant sample");
  }

  static const double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static const double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static const double c3[] = {0.5440, -0.39978, 0.025054, -6.714e-4};
  static const double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static const double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static const double c6[] = {-0.4803, -0.082676, 0.0030302};
  static const double g[] = {-2.273, 0.459};

  const boost::math::normal_distribution<double> std_normal;
  const int half = n / 2;
  // Coefficients for the upper half; a[i] pairs x(n−1−i) with x(i).
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (int i = 0; i < half; ++i) {
      m[i] = boost::math::quantile(std_normal, (i + 1 - 0.375) / (n + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
    const double a1 = poly(c1, 6, rsn) - m[0] / ssumm2;
    int first;
    double fac;
    if (n > 5) {
      first = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, 6, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      first = 1;
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (int i = first; i < half; ++i) a[i] = -m[i] / fac;
  }

  const double xm = mean(x);
  double ss = 0.0, num = 0.0;
  for (double v : x) ss += (v - xm) * (v - xm);
  for (int i = 0; i < half; ++i) num += a[i] * (x[n - 1 - i] - x[i]);
  double w = num * num / ss;
  w = std::min(w, 1.0);

  TestResult r;
  r.test = "shapiro_wilk";
  r.null_hypothesis = "sample drawn from a normal distribution";
  r.statistic = w;
  if (n == 3) {
    const double pi6 = 6.0 / M_PI, stqr = M_PI / 3.0;
    r.p_value = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
    return r;
  }
  double y = std::log(1.0 - w);
  double mu, sigma;
  if (n <= 11) {
    const double gamma = poly(g, 2, n);
    if (y >= gamma) {
      r.p_value = 1e-99;
      return r;
    }
    y = -std::log(gamma - y);
    mu = poly(c3, 4, n);
    sigma = std::exp(poly(c4, 4, n));
  } else {
    const double ln = std::log(static_cast<double>(n));
    mu = poly(c5, 4, ln);
    sigma = std::exp(poly(c6, 3, ln));
  }
  if (!std::isfinite(y)) {
    // W == 1: perfectly normal-looking sample.
    r.p_value = 1.0;
    return r;
  }
  r.p_value = boost::math::cdf(boost::math::complement(
      boost::math::normal_distribution<double>(mu, sigma), y));
  return r;
}

TestResult f_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("F-test needs n >= 2 per sample");
  const double vb = variance(b);
  if (!(vb > 0.0)) throw std::invalid_argument("F-test undefined: second sample has zero variance");
  TestResult r;
  r.test = "f_test";
  r.null_hypothesis = "equal variances";
  r.statistic = variance(a) / vb;
  const boost::math::fisher_f_distribution<double> dist(
      static_cast<double>(a.size() - 1), static_cast<double>(b.size() - 1));
  const double lower = boost::math::cdf(dist, r.statistic);
  const double upper = boost::math::cdf(boost::math::complement(dist, r.statistic));
  r.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  return r;
}

TestResult t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t-test needs n >= 2 per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double df = na + nb - 2.0;
  const double pooled = ((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / df;
  if (!(pooled > 0.0)) throw std::invalid_argument("t-test undefined: zero pooled variance");
  TestResult r;
  r.test = "t_test";
  r.null_hypothesis = "equal means";
  r.statistic = (mean(a) - mean(b)) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  const boost::math::students_t_distribution<double> dist(df);
  r.p_value = std::min(
      1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.statistic))));
  return r;
}

}  // namespace fairuc
