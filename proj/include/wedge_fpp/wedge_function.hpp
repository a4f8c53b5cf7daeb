#pragma once

#include <vector>

namespace wedge {

enum class WedgeKind { LogLogLog, PowerLaw, LogPower, Custom };

// Boundary function of the wedge. Every kind satisfies f(0) = 0 and is
// nondecreasing on [0, inf).
//   LogLogLog: f(u) = a*log(1+u) + b*log(1+log(1+u)),  a > 0, b >= 0
//   PowerLaw:  f(u) = u^a,                              a in (0,1)
//   LogPower:  f(u) = log(1+u)^a,                       a > 0
//   Custom:    tabulated values at integer arguments, linear in between
struct WedgeFunction {
  WedgeKind kind = WedgeKind::LogLogLog;
  double a = 1.0;
  double b = 0.0;
  std::vector<double> table;

  static WedgeFunction log_loglog(double a, double b);
  static WedgeFunction power_law(double a);
  static WedgeFunction log_power(double a);
  static WedgeFunction custom(std::vector<double> values);
};

double eval_f(const WedgeFunction& f, double u);

// ell = smallest integer d >= 0 with f(d) >= j.
struct LevelIndex {
  long long j = 0;
  long long ell = 0;
};

LevelIndex level(const WedgeFunction& f, long long j);

// Real generalized inverse min{u >= 0 : f(u) >= y}. Usable where the integer
// level would overflow the exact-integer range of a double.
double inverse_f_real(const WedgeFunction& f, double y);

// Predicted ell_j ~ e^{j/a} / (j/a)^{b/a} and the implied consecutive gap.
// Only meaningful for the LogLogLog kind; exact levels are the authority.
struct LevelAsymptote {
  double ell_predicted = 0.0;
  double gap_predicted = 0.0;
};

LevelAsymptote level_gap_asymptote(const WedgeFunction& f, long long j);

}  // namespace wedge
