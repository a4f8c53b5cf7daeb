#pragma once

#include <cstdint>
#include <vector>

#include "wedge_fpp/regimes.hpp"
#include "wedge_fpp/sequences.hpp"
#include "wedge_fpp/stats.hpp"
#include "wedge_fpp/wedge_function.hpp"
#include "wedge_fpp/weights.hpp"

namespace wedge {

// Replicated passage-time measurements over an n-grid. Per replica the
// possible measurements are the general-weight time T, the Bernoulli time
// T_B, the dual separating count Y (always checked equal to T_B when both
// are on), and the per-level dual count total.
struct ExperimentPlan {
  WedgeFunction f;
  WeightModel model;
  std::vector<long long> n_grid;  // strictly increasing
  long long replicas = 100;
  uint64_t seed = 12345;
  bool measure_general = true;
  bool measure_bernoulli = true;
  bool measure_dual = false;
  bool measure_level_total = false;  // sum over j of the level counts
  int workers = 1;
  long long max_vertices = (1ll << 26);

  void validate() const;
};

struct MeasureSummary {
  long long n = 0;
  long long replicas = 0;
  double mean = 0.0;
  double var = 0.0;  // unbiased
  double skew = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct ExperimentRecord {
  ExperimentPlan plan;
  // Indexed like n_grid; empty when the measurement is off.
  std::vector<MeasureSummary> general, bernoulli, dual, level_total;
  std::vector<std::vector<double>> general_samples, bernoulli_samples,
      dual_samples, level_total_samples;
};

// Deterministic in (plan, seed) and independent of the worker count:
// replica fields draw from per-index streams, slots are reduced in order.
ExperimentRecord run(const ExperimentPlan& plan);

struct RatioBandVerdict {
  std::vector<long long> n;  // top half of the grid
  std::vector<double> ratio;
  double band = 0.0;  // max ratio / min ratio
  double band_limit = 4.0;
  double trend_slope = 0.0;
  double trend_se = 0.0;
  bool band_ok = false;
  bool trend_ok = false;
  bool skipped = false;
  bool pass = false;
};

// Var/mean ratio over the top half of the grid: band <= limit and no trend
// beyond noise. Skipped (pass = true) for the Bounded regime, whose mean
// does not diverge.
RatioBandVerdict variance_mean_test(const ExperimentRecord& record,
                                    GrowthRegime regime,
                                    double band_limit = 4.0);

// Var against the block-counting function iota(n): band <= limit over the
// top half of the grid.
RatioBandVerdict iota_variance_test(const ExperimentRecord& record,
                                    const BlockSequence& seq,
                                    double band_limit = 4.0);

// Kolmogorov-Smirnov normality of the standardized samples at one grid
// point; needs >= 1000 replicas and positive variance.
KsResult clt_test(const ExperimentRecord& record, long long n);

}  // namespace wedge
