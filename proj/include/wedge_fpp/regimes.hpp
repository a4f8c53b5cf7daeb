#pragma once

#include <string>
#include <vector>

namespace wedge {

// Growth regime of the mean passage time, as a function of (a, b, p) and the
// subcritical decay length xi measured at 1 - p.
enum class GrowthRegime {
  SubcriticalLinear,  // p < 1/2: linear growth
  CriticalLog,        // p = 1/2: n / (a log n)
  PowerOverLog,       // p > 1/2, a < xi: n^(1-a/xi) / (log n)^(b/xi)
  LogPower,           // p > 1/2, b < a = xi: (log n)^(1-b/xi)
  LogLog,             // p > 1/2, a = b = xi: log log n
  Bounded,            // otherwise: means stay bounded
};

struct RegimeClassification {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  double xi_hat = 0.0;
  double xi_ci = 0.0;  // half-width; 0 means a point estimate
  GrowthRegime regime = GrowthRegime::Bounded;

  // a = xi was declared because the estimate could not separate them.
  bool equality_ambiguous = false;
  // |a - xi| < 10% of xi: constants blow up like 1/(xi - a), so growth-rate
  // fits converge slowly.
  bool near_critical = false;

  std::string rate_formula;     // human-readable growth law
  std::string prefactor_lower;  // symbolic lower band
  std::string prefactor_upper;  // symbolic upper band
};

const char* regime_name(GrowthRegime r);

// Total over a > 0, b >= 0, p in (0,1). Equality a = xi is declared when
// |a - xi_hat| <= xi_ci, otherwise the point estimates are compared strictly.
RegimeClassification classify(double a, double b, double p, double xi_hat,
                              double xi_ci = 0.0);

// Evaluates the regime's growth function at n >= 3. Bounded regimes return 1.
double rate(const RegimeClassification& c, double n);

struct FitReport {
  std::vector<double> n;
  std::vector<double> ratio;  // measured mean / rate(n)
  double ratio_mean = 0.0;
  double band_lo = 0.0;  // min ratio / mean ratio
  double band_hi = 0.0;  // max ratio / mean ratio

  double trend_slope = 0.0;  // ratio regressed on log n; ~0 when rate matches
  double trend_se = 0.0;
  bool trend_flat = false;

  // Slope of log(mean * log-correction) against log n, with the regime's
  // pure-log factors removed so the target is the power of n.
  double powerlike_slope = 0.0;
  double powerlike_se = 0.0;
  double powerlike_target = 0.0;

  // Significant ratio trend while the power of n still matches: prefactor
  // drift rather than a wrong regime.
  bool drift_flag = false;
};

// Compares a measured (n, mean) curve against the classified rate. Needs at
// least 6 points spanning a factor of 8 in n, all with n >= 3.
FitReport fit_against_rate(const std::vector<double>& n,
                           const std::vector<double>& mean,
                           const RegimeClassification& c);

}  // namespace wedge
