#include "wedge_fpp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "wedge_fpp/errors.hpp"

namespace wedge {

Interval wilson_ci(long long k, long long n) {
  if (n <= 0) return {0.0, 1.0};
  if (k < 0 || k > n) throw ValidationError("wilson_ci: k outside [0, n]");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (ph + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void Moments::add(double x) {
  ++count;
  const double n = static_cast<double>(count);
  const double delta = x - mean;
  const double delta_n = delta / n;
  const double term1 = delta * delta_n * (n - 1.0);
  m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
  m2 += term1;
  mean += delta_n;
}

double Moments::variance() const {
  if (count < 2) return 0.0;
  return m2 / static_cast<double>(count - 1);
}

double Moments::stddev() const { return std::sqrt(variance()); }

double Moments::skewness() const {
  if (count < 3 || m2 <= 0.0) return 0.0;
  const double n = static_cast<double>(count);
  return (m3 / n) / std::pow(m2 / n, 1.5);
}

double Moments::stderr_mean() const {
  if (count < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(count));
}

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw ValidationError("least_squares: need at least 3 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ValidationError("least_squares: degenerate x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.slope_se = std::sqrt(ss_res / (n - 2.0) / sxx);
  return fit;
}

double fit_through_origin(const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty())
    throw ValidationError("fit_through_origin: need paired points");
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  if (sxx <= 0.0)
    throw ValidationError("fit_through_origin: degenerate x values");
  return sxy / sxx;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

KsResult ks_normal_test(std::vector<double> sample) {
  if (sample.size() < 8)
    throw ValidationError("ks_normal_test: sample too small");
  const double n = static_cast<double>(sample.size());
  double mean = 0;
  for (double v : sample) mean += v;
  mean /= n;
  double var = 0;
  for (double v : sample) var += (v - mean) * (v - mean);
  var /= (n - 1.0);
  if (var <= 0.0) throw ValidationError("ks_normal_test: zero variance");
  const double sd = std::sqrt(var);
  for (double& v : sample) v = (v - mean) / sd;
  std::sort(sample.begin(), sample.end());

  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }

  // Kolmogorov tail with the Stephens adjustment for finite n.
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term =
        std::exp(-2.0 * lambda * lambda * static_cast<double>(k) * k);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-12) break;
  }
  KsResult res;
  res.distance = d;
  res.p_value = std::min(1.0, std::max(0.0, p));
  return res;
}

}  // namespace wedge
