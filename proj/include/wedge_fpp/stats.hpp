#pragma once

#include <vector>

namespace wedge {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% Wilson score interval for k successes out of n trials.
Interval wilson_ci(long long k, long long n);

// Streaming central moments (Welford updates through the third moment).
struct Moments {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;

  void add(double x);
  double variance() const;  // unbiased
  double stddev() const;
  double skewness() const;     // standardized third central moment
  double stderr_mean() const;  // sqrt(variance / count)
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

// Ordinary least squares y = slope*x + intercept; needs >= 3 points for a
// slope standard error.
LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y);

// Best c for y = c*x in least squares.
double fit_through_origin(const std::vector<double>& x,
                          const std::vector<double>& y);

double normal_cdf(double z);

struct KsResult {
  double distance = 0.0;
  double p_value = 1.0;
};

// Two-sided Kolmogorov-Smirnov test of the sample against N(0,1) after
// standardizing by the sample's own mean and standard deviation. The p-value
// uses the Kolmogorov series with the Stephens finite-sample factor.
KsResult ks_normal_test(std::vector<double> sample);

}  // namespace wedge
