#include "wedge_fpp/wedge_function.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "wedge_fpp/errors.hpp"

namespace wedge {

namespace {

// Largest integer argument we trust for exact comparisons through a double.
constexpr double kMaxExactInteger = 4.0e15;

void require_valid(const WedgeFunction& f) {
  switch (f.kind) {
    case WedgeKind::LogLogLog:
      if (!(f.a > 0.0)) throw ValidationError("wedge function: a must be > 0");
      if (!(f.b >= 0.0)) throw ValidationError("wedge function: b must be >= 0");
      break;
    case WedgeKind::PowerLaw:
      if (!(f.a > 0.0 && f.a < 1.0))
        throw ValidationError("wedge function: power-law exponent must be in (0,1)");
      break;
    case WedgeKind::LogPower:
      if (!(f.a > 0.0))
        throw ValidationError("wedge function: log-power exponent must be > 0");
      break;
    case WedgeKind::Custom:
      if (f.table.empty())
        throw ValidationError("wedge function: empty table");
      break;
  }
}

}  // namespace

WedgeFunction WedgeFunction::log_loglog(double a, double b) {
  WedgeFunction f;
  f.kind = WedgeKind::LogLogLog;
  f.a = a;
  f.b = b;
  require_valid(f);
  return f;
}

WedgeFunction WedgeFunction::power_law(double a) {
  WedgeFunction f;
  f.kind = WedgeKind::PowerLaw;
  f.a = a;
  require_valid(f);
  return f;
}

WedgeFunction WedgeFunction::log_power(double a) {
  WedgeFunction f;
  f.kind = WedgeKind::LogPower;
  f.a = a;
  require_valid(f);
  return f;
}

WedgeFunction WedgeFunction::custom(std::vector<double> values) {
  WedgeFunction f;
  f.kind = WedgeKind::Custom;
  f.table = std::move(values);
  require_valid(f);
  if (f.table.front() != 0.0)
    throw ValidationError("custom wedge function must have f(0) = 0");
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    if (f.table[i] < 0.0)
      throw ValidationError("custom wedge function must be nonnegative");
    if (i > 0 && f.table[i] < f.table[i - 1])
      throw ValidationError("custom wedge function must be nondecreasing");
  }
  return f;
}

double eval_f(const WedgeFunction& f, double u) {
  if (!(u >= 0.0)) throw ValidationError("eval_f: argument must be >= 0");
  switch (f.kind) {
    case WedgeKind::LogLogLog:
      return f.a * std::log1p(u) + f.b * std::log1p(std::log1p(u));
    case WedgeKind::PowerLaw:
      return std::pow(u, f.a);
    case WedgeKind::LogPower:
      return std::pow(std::log1p(u), f.a);
    case WedgeKind::Custom: {
      const double last = static_cast<double>(f.table.size() - 1);
      if (u > last)
        throw ValidationError("eval_f: argument beyond custom table range");
      const auto k = static_cast<std::size_t>(u);
      if (static_cast<double>(k) == u) return f.table[k];
      const double frac = u - static_cast<double>(k);
      return f.table[k] + frac * (f.table[k + 1] - f.table[k]);
    }
  }
  throw InternalError("eval_f: unknown kind");
}

namespace {

// Smallest integer d in [lo, hi] with f(d) >= j, given f(hi) >= j.
long long bisect_level(const WedgeFunction& f, double j, long long lo,
                       long long hi) {
  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    if (eval_f(f, static_cast<double>(mid)) >= j)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

LevelIndex level(const WedgeFunction& f, long long j) {
  require_valid(f);
  if (j < 0) throw ValidationError("level: j must be >= 0");
  if (j == 0) return LevelIndex{0, 0};
  const double jd = static_cast<double>(j);

  if (f.kind == WedgeKind::Custom) {
    if (f.table.back() < jd)
      throw ValidationError("level: unreachable for bounded custom function");
    const long long hi = static_cast<long long>(f.table.size()) - 1;
    const long long d = bisect_level(f, jd, 0, hi);
    return LevelIndex{j, d};
  }

  if (f.kind == WedgeKind::LogLogLog && f.b == 0.0) {
    // Closed form: f(d) >= j iff d >= e^{j/a} - 1.
    const double u = std::expm1(jd / f.a);
    if (u > kMaxExactInteger)
      throw ResourceError("level: index exceeds the exact integer range");
    long long d = static_cast<long long>(std::ceil(u));
    // Half-ulp guard: verify against the evaluated function at the integers.
    while (d > 0 && eval_f(f, static_cast<double>(d - 1)) >= jd) --d;
    while (eval_f(f, static_cast<double>(d)) < jd) ++d;
    return LevelIndex{j, d};
  }

  // Monotone doubling bracket, then integer bisection.
  long long hi = 1;
  while (eval_f(f, static_cast<double>(hi)) < jd) {
    if (static_cast<double>(hi) > kMaxExactInteger / 2.0)
      throw ResourceError("level: index exceeds the exact integer range");
    hi *= 2;
  }
  const long long d = bisect_level(f, jd, 0, hi);
  return LevelIndex{j, d};
}

double inverse_f_real(const WedgeFunction& f, double y) {
  require_valid(f);
  if (!(y >= 0.0)) throw ValidationError("inverse_f_real: y must be >= 0");
  if (y == 0.0) return 0.0;
  if (f.kind == WedgeKind::LogLogLog && f.b == 0.0) return std::expm1(y / f.a);
  if (f.kind == WedgeKind::Custom && f.table.back() < y)
    throw ValidationError("inverse_f_real: unreachable for bounded custom function");

  double lo = 0.0;
  double hi = 1.0;
  const double hi_cap =
      (f.kind == WedgeKind::Custom)
          ? static_cast<double>(f.table.size() - 1)
          : std::numeric_limits<double>::max() / 4.0;
  while (eval_f(f, hi) < y) {
    if (hi >= hi_cap) {
      hi = hi_cap;
      break;
    }
    hi = std::min(hi * 2.0, hi_cap);
  }
  // Keep f(hi) >= y > f(lo); stop once the bracket is tight in doubles.
  for (int it = 0; it < 2000 && hi - lo > 1e-9 + 1e-14 * hi; ++it) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (eval_f(f, mid) >= y)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

LevelAsymptote level_gap_asymptote(const WedgeFunction& f, long long j) {
  if (f.kind != WedgeKind::LogLogLog)
    throw ValidationError("level_gap_asymptote: defined for the log + log-log kind only");
  require_valid(f);
  if (j < 1) throw ValidationError("level_gap_asymptote: j must be >= 1");
  const double x = static_cast<double>(j) / f.a;
  const double ell = std::exp(x) / std::pow(x, f.b / f.a);
  LevelAsymptote out;
  out.ell_predicted = ell;
  out.gap_predicted = std::expm1(1.0 / f.a) * ell;
  return out;
}

}  // namespace wedge
