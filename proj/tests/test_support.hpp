#pragma once

// Shared Monte Carlo helpers for the test suites: moment summaries, standard
// errors for variances, a KS test, and an independent normal-quantile oracle.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace test_support {

inline double mean(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

// Standard error of the sample variance from the fourth central moment.
inline double variance_se(std::span<const double> xs) {
  double m = mean(xs);
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    double d2 = (x - m) * (x - m);
    m2 += d2;
    m4 += d2 * d2;
  }
  double n = static_cast<double>(xs.size());
  m2 /= n;
  m4 /= n;
  return std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
}

// Covariance of paired samples.
inline double sample_covariance(std::span<const double> xs,
                                std::span<const double> ys) {
  double mx = mean(xs), my = mean(ys);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += (xs[i] - mx) * (ys[i] - my);
  return acc / static_cast<double>(xs.size() - 1);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Independent quantile oracle: bisection on the erfc-based CDF.
inline double normal_quantile_oracle(double p) {
  double lo = -10.0, hi = 10.0;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// One-sample Kolmogorov-Smirnov statistic against the standard normal.
inline double ks_statistic_vs_normal(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double cdf = normal_cdf(xs[i]);
    double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    double lo = cdf - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

// Asymptotic KS critical value at level alpha: c(alpha)/sqrt(n).
inline double ks_critical(double alpha, std::size_t n) {
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c / std::sqrt(static_cast<double>(n));
}

}  // namespace test_support
