#include "wedge_fpp/harness.hpp"

#include <algorithm>
#include <cmath>

#include "wedge_fpp/dual_crossings.hpp"
#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/parallel.hpp"
#include "wedge_fpp/rng.hpp"
#include "wedge_fpp/shortest_path.hpp"

namespace wedge {

void ExperimentPlan::validate() const {
  model.validate();
  if (n_grid.empty()) throw ValidationError("plan: empty n grid");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] < 1) throw ValidationError("plan: n must be >= 1");
    if (k > 0 && n_grid[k] <= n_grid[k - 1])
      throw ValidationError("plan: n grid must strictly increase");
  }
  if (replicas < 1) throw ValidationError("plan: need replicas >= 1");
  if (!measure_general && !measure_bernoulli && !measure_dual &&
      !measure_level_total)
    throw ValidationError("plan: nothing to measure");
  if (workers < 1) throw ValidationError("plan: need workers >= 1");
}

namespace {

MeasureSummary summarize(long long n, const std::vector<double>& samples) {
  Moments m;
  for (double x : samples) m.add(x);
  MeasureSummary s;
  s.n = n;
  s.replicas = m.count;
  s.mean = m.mean;
  s.var = m.variance();
  s.skew = m.skewness();
  s.se = m.stderr_mean();
  const double z = 1.959963984540054;
  s.ci_lo = s.mean - z * s.se;
  s.ci_hi = s.mean + z * s.se;
  return s;
}

}  // namespace

ExperimentRecord run(const ExperimentPlan& plan) {
  plan.validate();
  ExperimentRecord rec;
  rec.plan = plan;

  const bool constant_law = plan.model.law == PositiveLaw::ConstantAtDelta;
  const bool need_bernoulli =
      plan.measure_bernoulli || plan.measure_dual ||
      (plan.measure_general && constant_law);

  for (std::size_t ni = 0; ni < plan.n_grid.size(); ++ni) {
    const long long n = plan.n_grid[ni];
    const WedgeGraph g = build_graph(plan.f, n, plan.max_vertices);

    std::vector<double> t_gen(plan.replicas), t_bern(plan.replicas),
        y_dual(plan.replicas), lvl(plan.replicas);

    parallel_for(plan.replicas, plan.workers, [&](long long rep) {
      const WeightField field = sample_weight_field(
          plan.model, g, plan.seed,
          derive_stream(static_cast<uint64_t>(ni),
                        static_cast<uint64_t>(rep)));
      double tb = 0.0;
      if (need_bernoulli) {
        PassageTimeQuery q;
        q.source = PassageTimeQuery::origin();
        q.target = PassageTimeQuery::line(n);
        q.mode = PassageTimeQuery::Mode::Bernoulli;
        tb = passage_time(g, field, q).value;
        t_bern[static_cast<std::size_t>(rep)] = tb;
      }
      if (plan.measure_general) {
        if (constant_law) {
          // With a constant positive part the general geodesic minimizes the
          // same closed-edge count, so T = delta * T_B exactly.
          t_gen[static_cast<std::size_t>(rep)] = plan.model.delta * tb;
        } else {
          PassageTimeQuery q;
          q.source = PassageTimeQuery::origin();
          q.target = PassageTimeQuery::line(n);
          q.mode = PassageTimeQuery::Mode::General;
          t_gen[static_cast<std::size_t>(rep)] = passage_time(g, field, q).value;
        }
      }
      if (plan.measure_dual || plan.measure_level_total) {
        if (plan.measure_dual) {
          const long long y = dual_separating_count(g, field).value;
          y_dual[static_cast<std::size_t>(rep)] = static_cast<double>(y);
          if (need_bernoulli &&
              y != static_cast<long long>(std::llround(tb)))
            throw InternalError(
                "run: dual separating count differs from the Bernoulli time");
        }
        if (plan.measure_level_total) {
          long long total = 0;
          for (long long j = 0; j <= g.top_height; ++j)
            total += dual_level_count(g, field, j).value;
          lvl[static_cast<std::size_t>(rep)] = static_cast<double>(total);
        }
      }
    });

    if (plan.measure_general) {
      rec.general.push_back(summarize(n, t_gen));
      rec.general_samples.push_back(std::move(t_gen));
    }
    if (plan.measure_bernoulli) {
      rec.bernoulli.push_back(summarize(n, t_bern));
      rec.bernoulli_samples.push_back(std::move(t_bern));
    }
    if (plan.measure_dual) {
      rec.dual.push_back(summarize(n, y_dual));
      rec.dual_samples.push_back(std::move(y_dual));
    }
    if (plan.measure_level_total) {
      rec.level_total.push_back(summarize(n, lvl));
      rec.level_total_samples.push_back(std::move(lvl));
    }
  }
  return rec;
}

namespace {

const std::vector<MeasureSummary>& pick_series(const ExperimentRecord& rec) {
  if (!rec.general.empty()) return rec.general;
  if (!rec.bernoulli.empty()) return rec.bernoulli;
  throw ValidationError("record carries no passage-time series");
}

RatioBandVerdict band_verdict(const std::vector<long long>& n,
                              const std::vector<double>& ratio,
                              double band_limit, bool gate_on_trend) {
  RatioBandVerdict v;
  v.n = n;
  v.ratio = ratio;
  v.band_limit = band_limit;
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  if (!(*lo > 0.0))
    throw ValidationError("ratio band: nonpositive ratio entries");
  v.band = *hi / *lo;
  v.band_ok = v.band <= band_limit;
  if (n.size() >= 3) {
    std::vector<double> log_n;
    for (long long x : n) log_n.push_back(std::log(static_cast<double>(x)));
    const LineFit fit = least_squares(log_n, ratio);
    v.trend_slope = fit.slope;
    v.trend_se = fit.slope_se;
    const double scale = (*hi + *lo) / 2.0;
    v.trend_ok = std::fabs(v.trend_slope) <= 3.0 * v.trend_se + 1e-9 * scale;
  } else {
    v.trend_ok = true;
  }
  v.pass = v.band_ok && (!gate_on_trend || v.trend_ok);
  return v;
}

}  // namespace

RatioBandVerdict variance_mean_test(const ExperimentRecord& record,
                                    GrowthRegime regime, double band_limit) {
  if (regime == GrowthRegime::Bounded) {
    RatioBandVerdict v;
    v.skipped = true;
    v.pass = true;
    return v;
  }
  const auto& series = pick_series(record);
  if (series.size() < 2)
    throw ValidationError("variance_mean_test: need at least 2 grid points");
  std::vector<long long> n;
  std::vector<double> ratio;
  for (std::size_t k = series.size() / 2; k < series.size(); ++k) {
    if (!(series[k].mean > 0.0))
      throw ValidationError("variance_mean_test: mean not positive");
    n.push_back(series[k].n);
    ratio.push_back(series[k].var / series[k].mean);
  }
  return band_verdict(n, ratio, band_limit, true);
}

RatioBandVerdict iota_variance_test(const ExperimentRecord& record,
                                    const BlockSequence& seq,
                                    double band_limit) {
  const auto& series = pick_series(record);
  if (series.size() < 2)
    throw ValidationError("iota_variance_test: need at least 2 grid points");
  std::vector<long long> n;
  std::vector<double> ratio;
  for (std::size_t k = series.size() / 2; k < series.size(); ++k) {
    const long long blocks = iota(seq, series[k].n);
    if (blocks < 1)
      throw ValidationError("iota_variance_test: iota must be positive");
    n.push_back(series[k].n);
    ratio.push_back(series[k].var / static_cast<double>(blocks));
  }
  return band_verdict(n, ratio, band_limit, false);
}

KsResult clt_test(const ExperimentRecord& record, long long n) {
  const auto& series = pick_series(record);
  const auto& samples =
      !record.general.empty() ? record.general_samples
                              : record.bernoulli_samples;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k].n != n) continue;
    if (series[k].replicas < 1000)
      throw ValidationError("clt_test: need >= 1000 replicas");
    if (!(series[k].var > 0.0))
      throw ValidationError("clt_test: degenerate samples");
    return ks_normal_test(samples[k]);
  }
  throw ValidationError("clt_test: n not in the grid");
}

}  // namespace wedge
