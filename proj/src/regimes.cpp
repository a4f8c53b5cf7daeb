#include "wedge_fpp/regimes.hpp"

#include <algorithm>
#include <cmath>

#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/stats.hpp"

namespace wedge {

const char* regime_name(GrowthRegime r) {
  switch (r) {
    case GrowthRegime::SubcriticalLinear: return "SubcriticalLinear";
    case GrowthRegime::CriticalLog: return "CriticalLog";
    case GrowthRegime::PowerOverLog: return "PowerOverLog";
    case GrowthRegime::LogPower: return "LogPower";
    case GrowthRegime::LogLog: return "LogLog";
    case GrowthRegime::Bounded: return "Bounded";
  }
  return "?";
}

namespace {

std::string formula_for(GrowthRegime r) {
  switch (r) {
    case GrowthRegime::SubcriticalLinear: return "n";
    case GrowthRegime::CriticalLog: return "n / (a log n)";
    case GrowthRegime::PowerOverLog: return "n^(1-a/xi) / (log n)^(b/xi)";
    case GrowthRegime::LogPower: return "(log n)^(1-b/xi)";
    case GrowthRegime::LogLog: return "log log n";
    case GrowthRegime::Bounded: return "1";
  }
  return "?";
}

}  // namespace

RegimeClassification classify(double a, double b, double p, double xi_hat,
                              double xi_ci) {
  if (!(a > 0.0) || !(b >= 0.0) || !(p > 0.0) || !(p < 1.0))
    throw ValidationError("classify: need a > 0, b >= 0, p in (0,1)");
  if (xi_ci < 0.0) throw ValidationError("classify: negative CI half-width");

  RegimeClassification c;
  c.a = a;
  c.b = b;
  c.p = p;
  c.xi_hat = xi_hat;
  c.xi_ci = xi_ci;

  if (p < 0.5) {
    c.regime = GrowthRegime::SubcriticalLinear;
  } else if (p == 0.5) {
    c.regime = GrowthRegime::CriticalLog;
  } else {
    if (!(xi_hat > 0.0))
      throw ValidationError("classify: supercritical case needs xi > 0");
    const bool equal = std::fabs(a - xi_hat) <= xi_ci || a == xi_hat;
    c.equality_ambiguous = equal && a != xi_hat;
    c.near_critical = std::fabs(a - xi_hat) / xi_hat < 0.1;
    if (equal) {
      if (b < a)
        c.regime = GrowthRegime::LogPower;
      else if (b == a)
        c.regime = GrowthRegime::LogLog;
      else
        c.regime = GrowthRegime::Bounded;
    } else if (a < xi_hat) {
      c.regime = GrowthRegime::PowerOverLog;
    } else {
      c.regime = GrowthRegime::Bounded;
    }
  }

  c.rate_formula = formula_for(c.regime);
  c.prefactor_lower = "c * " + c.rate_formula;
  if (c.regime == GrowthRegime::PowerOverLog)
    c.prefactor_upper = "C/(xi-a) * " + c.rate_formula;
  else
    c.prefactor_upper = "C * " + c.rate_formula;
  return c;
}

double rate(const RegimeClassification& c, double n) {
  if (!(n >= 3.0)) throw ValidationError("rate: need n >= 3");
  switch (c.regime) {
    case GrowthRegime::SubcriticalLinear:
      return n;
    case GrowthRegime::CriticalLog:
      return n / (c.a * std::log(n));
    case GrowthRegime::PowerOverLog:
      return std::pow(n, 1.0 - c.a / c.xi_hat) /
             std::pow(std::log(n), c.b / c.xi_hat);
    case GrowthRegime::LogPower:
      return std::pow(std::log(n), 1.0 - c.b / c.xi_hat);
    case GrowthRegime::LogLog:
      return std::log(std::log(n));
    case GrowthRegime::Bounded:
      return 1.0;
  }
  throw InternalError("rate: unhandled regime");
}

FitReport fit_against_rate(const std::vector<double>& n,
                           const std::vector<double>& mean,
                           const RegimeClassification& c) {
  if (n.size() != mean.size() || n.size() < 6)
    throw ValidationError("fit_against_rate: need >= 6 matched points");
  const auto [lo_it, hi_it] = std::minmax_element(n.begin(), n.end());
  if (!(*lo_it >= 3.0))
    throw ValidationError("fit_against_rate: need n >= 3");
  if (*hi_it < 8.0 * *lo_it)
    throw ValidationError("fit_against_rate: n must span a factor of 8");
  for (double m : mean)
    if (!(m > 0.0))
      throw ValidationError("fit_against_rate: means must be positive");

  FitReport rep;
  rep.n = n;
  std::vector<double> log_n, log_adjusted;
  double sum = 0.0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    rep.ratio.push_back(mean[k] / rate(c, n[k]));
    sum += rep.ratio.back();
    log_n.push_back(std::log(n[k]));

    // Remove only the pure-log correction so the regression target is the
    // exponent of n itself.
    double log_factor = 1.0;
    if (c.regime == GrowthRegime::CriticalLog)
      log_factor = c.a * std::log(n[k]);
    else if (c.regime == GrowthRegime::PowerOverLog)
      log_factor = std::pow(std::log(n[k]), c.b / c.xi_hat);
    log_adjusted.push_back(std::log(mean[k] * log_factor));
  }
  rep.ratio_mean = sum / static_cast<double>(rep.ratio.size());
  const auto [rmin, rmax] = std::minmax_element(rep.ratio.begin(),
                                                rep.ratio.end());
  rep.band_lo = *rmin / rep.ratio_mean;
  rep.band_hi = *rmax / rep.ratio_mean;

  const LineFit trend = least_squares(log_n, rep.ratio);
  rep.trend_slope = trend.slope;
  rep.trend_se = trend.slope_se;
  rep.trend_flat = std::fabs(rep.trend_slope) <=
                   3.0 * rep.trend_se + 1e-9 * std::fabs(rep.ratio_mean);

  const LineFit powerlike = least_squares(log_n, log_adjusted);
  rep.powerlike_slope = powerlike.slope;
  rep.powerlike_se = powerlike.slope_se;
  switch (c.regime) {
    case GrowthRegime::SubcriticalLinear:
    case GrowthRegime::CriticalLog:
      rep.powerlike_target = 1.0;
      break;
    case GrowthRegime::PowerOverLog:
      rep.powerlike_target = 1.0 - c.a / c.xi_hat;
      break;
    default:
      rep.powerlike_target = 0.0;
      break;
  }
  rep.drift_flag = !rep.trend_flat &&
                   std::fabs(rep.powerlike_slope - rep.powerlike_target) <=
                       0.15 + 3.0 * rep.powerlike_se;
  return rep;
}

}  // namespace wedge
