#include <cmath>
#include <vector>

#include "doctest.h"
#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/rng.hpp"
#include "wedge_fpp/stats.hpp"

using namespace wedge;

TEST_CASE("wilson interval endpoints and frozen values") {
  const Interval degenerate = wilson_ci(0, 0);
  CHECK(degenerate.lo == 0.0);
  CHECK(degenerate.hi == 1.0);

  const Interval none = wilson_ci(0, 50);
  CHECK(none.lo < 1e-12);  // center and half-width cancel up to rounding
  CHECK(none.hi > 0.0);
  CHECK(none.hi < 0.15);

  const Interval all = wilson_ci(50, 50);
  CHECK(all.hi > 1.0 - 1e-12);
  CHECK(all.lo > 0.85);

  // Frozen reference: k=5, n=10 with z=1.96 gives [0.2366, 0.7634].
  const Interval half = wilson_ci(5, 10);
  CHECK(half.lo == doctest::Approx(0.2366).epsilon(0.01));
  CHECK(half.hi == doctest::Approx(0.7634).epsilon(0.01));
  // Interval always contains the point estimate.
  CHECK(half.lo < 0.5);
  CHECK(half.hi > 0.5);
}

TEST_CASE("streaming moments match two-pass formulas") {
  const Philox4x64 gen(88, 0);
  std::vector<double> xs;
  Moments m;
  for (int i = 0; i < 5000; ++i) {
    const double x = u01(gen.word(static_cast<std::uint64_t>(i), 0, 0)) * 3.0 - 1.0;
    xs.push_back(x);
    m.add(x);
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double v2 = 0.0, v3 = 0.0;
  for (double x : xs) {
    v2 += (x - mean) * (x - mean);
    v3 += (x - mean) * (x - mean) * (x - mean);
  }
  const double var = v2 / static_cast<double>(xs.size() - 1);

  CHECK(m.count == 5000);
  CHECK(m.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(m.variance() == doctest::Approx(var).epsilon(1e-10));
  CHECK(m.stddev() == doctest::Approx(std::sqrt(var)).epsilon(1e-10));
  const double skew =
      (v3 / static_cast<double>(xs.size())) /
      std::pow(v2 / static_cast<double>(xs.size()), 1.5);
  CHECK(m.skewness() == doctest::Approx(skew).epsilon(1e-8));
  CHECK(m.stderr_mean() ==
        doctest::Approx(std::sqrt(var / 5000.0)).epsilon(1e-10));
}

TEST_CASE("moments saturate rather than blow up on tiny samples") {
  Moments m;
  CHECK(m.count == 0);
  CHECK(m.variance() == 0.0);
  CHECK(m.stderr_mean() == 0.0);
  m.add(2.0);
  CHECK(m.mean == 2.0);
  CHECK(m.variance() == 0.0);  // one point carries no spread information
  CHECK(m.skewness() == 0.0);
  m.add(2.0);
  CHECK(m.variance() == 0.0);
  m.add(5.0);
  CHECK(m.variance() == doctest::Approx(3.0));  // {2,2,5}: var = 3
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  std::vector<double> y;
  for (double xi : x) y.push_back(-2.5 * xi + 7.0);
  const LineFit fit = least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(fit.slope_se == doctest::Approx(0.0));

  CHECK_THROWS_AS(least_squares({1.0, 2.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(least_squares({1.0, 2.0}, {1.0, 2.0}), ValidationError);
  // Degenerate abscissa: slope undefined.
  CHECK_THROWS_AS(least_squares({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}),
                  ValidationError);
}

TEST_CASE("fit through origin is the scaling projection") {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {3, 6, 9, 12};
  CHECK(fit_through_origin(x, y) == doctest::Approx(3.0).epsilon(1e-12));
  // Least-squares projection formula on non-collinear data.
  const std::vector<double> y2 = {3, 5, 10, 12};
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += x[i] * y2[i];
    den += x[i] * x[i];
  }
  CHECK(fit_through_origin(x, y2) == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("normal cdf reference points") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(normal_cdf(-1.959963985) == doctest::Approx(0.025).epsilon(1e-4));
  CHECK(normal_cdf(5.0) > 0.9999997);
}

TEST_CASE("ks test accepts normal data and rejects uniform data") {
  const Philox4x64 gen(2468, 1);
  std::vector<double> normal, uniform;
  for (int i = 0; i < 2000; ++i) {
    const double u1 = u01(gen.word(static_cast<std::uint64_t>(i), 0, 0));
    const double u2 = u01(gen.word(static_cast<std::uint64_t>(i), 1, 0));
    // Box-Muller from two uniforms.
    const double z =
        std::sqrt(-2.0 * std::log(u1 + 1e-300)) * std::cos(6.283185307179586 * u2);
    normal.push_back(z);
    uniform.push_back(u1);
  }
  const KsResult ok = ks_normal_test(normal);
  CHECK(ok.p_value > 0.01);
  CHECK(ok.distance < 0.05);

  const KsResult bad = ks_normal_test(uniform);
  CHECK(bad.p_value < 1e-4);

  CHECK_THROWS_AS(ks_normal_test({}), ValidationError);
  CHECK_THROWS_AS(ks_normal_test({1.0, 1.0, 1.0}), ValidationError);
}
