#include "wedge_fpp/martingale.hpp"

#include <algorithm>
#include <cmath>

#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/rng.hpp"
#include "wedge_fpp/shortest_path.hpp"
#include "wedge_fpp/stats.hpp"

namespace wedge {

CrossingOracle::CrossingOracle(const WedgeGraph& g, const BlockSequence& seq,
                               const WeightField& field, long long scan_cap)
    : g_(&g),
      seq_(&seq),
      field_(&field),
      open_(open_from_field(field)),
      cap_(scan_cap) {
  if (scan_cap < 1)
    throw ValidationError("CrossingOracle: scan cap must be positive");
  if (field.graph != &g)
    throw ValidationError("CrossingOracle: field sampled on another graph");
  last_prime_ = seq.prime_blocks();
  while (last_prime_ >= 0 && seq.r_at(2 * last_prime_ + 2) > g.n)
    --last_prime_;
}

bool CrossingOracle::block_has_crossing(long long j) {
  if (j < 0 || j > last_prime_)
    throw ValidationError("CrossingOracle: prime block out of range");
  const auto it = exists_.find(j);
  if (it != exists_.end()) return it->second == 1;
  const BlockRegion r = prime_region(*seq_, *g_, j);
  const bool yes = top_down_crossing_exists(r, open_);
  exists_[j] = yes ? 1 : 2;
  return yes;
}

const std::vector<long long>& CrossingOracle::gamma(long long j) {
  const auto it = gamma_.find(j);
  if (it != gamma_.end()) return it->second;
  if (!block_has_crossing(j))
    throw ValidationError("CrossingOracle: prime block has no crossing");
  const BlockRegion r = prime_region(*seq_, *g_, j);
  return gamma_[j] = leftmost_crossing(r, open_);
}

long long CrossingOracle::find_m_or_fail(long long i) {
  if (i < 0) throw ValidationError("CrossingOracle: negative block index");
  const long long stop = std::min(i + cap_, last_prime_);
  for (long long j = i; j <= stop; ++j)
    if (block_has_crossing(j)) return j;
  return -1;
}

long long CrossingOracle::find_m(long long i) {
  const long long m = find_m_or_fail(i);
  if (m < 0)
    throw ResourceError(
        "CrossingOracle: no crossing within the scan cap or sequence");
  return m;
}

CrossingState crossing_state(CrossingOracle& oracle, long long i) {
  CrossingState st;
  st.i = i;
  st.m_i = oracle.find_m(i);
  st.gamma = oracle.gamma(st.m_i);
  const BlockRegion r =
      prime_region(oracle.sequence(), oracle.graph(), st.m_i);
  st.interior_area = interior_area(r, st.gamma);
  return st;
}

double crossing_passage(const WedgeGraph& g, const WeightField& field,
                        const std::vector<long long>& source,
                        const std::vector<long long>& target) {
  if (source.empty() || target.empty())
    throw ValidationError("crossing_passage: empty endpoint set");
  if (source == target) return 0.0;
  long long lo = g.n, hi = 0;
  for (long long v : source) {
    lo = std::min(lo, g.column_of[static_cast<std::size_t>(v)]);
    hi = std::max(hi, g.column_of[static_cast<std::size_t>(v)]);
  }
  for (long long v : target) {
    lo = std::min(lo, g.column_of[static_cast<std::size_t>(v)]);
    hi = std::max(hi, g.column_of[static_cast<std::size_t>(v)]);
  }
  PassageTimeQuery q;
  q.source = PassageTimeQuery::crossing(source);
  q.target = PassageTimeQuery::crossing(target);
  q.mode = PassageTimeQuery::Mode::General;
  q.window_lo = lo;
  q.window_hi = hi;
  return passage_time(g, field, q).value;
}

double origin_to_crossing_time(CrossingOracle& oracle, long long i0) {
  const long long m = oracle.find_m(i0);
  const std::vector<long long> origin{oracle.graph().vertex_id(0, 0)};
  return crossing_passage(oracle.graph(), oracle.field(), origin,
                          oracle.gamma(m));
}

DeltaEstimate estimate_delta(CrossingOracle& outer, long long i, long long i0,
                             const DeltaOptions& opt) {
  if (i < 0 || i > i0)
    throw ValidationError("estimate_delta: need 0 <= i <= i0");
  if (opt.inner < 1)
    throw ValidationError("estimate_delta: need at least one inner field");

  const WedgeGraph& g = outer.graph();
  const BlockSequence& seq = outer.sequence();
  const WeightModel& model = outer.field().model;

  DeltaEstimate est;
  est.i = i;
  est.i0 = i0;
  est.m_i = outer.find_m(i);
  est.m_prev = i == 0 ? est.m_i : outer.find_m(i - 1);
  est.on_event = est.m_i < i0;
  est.on_prev_event = i == 0 || est.m_prev < i0;

  // Equal scan results mean the revealed regions coincide, so the increment
  // vanishes identically and no inner sampling is needed.
  if (i >= 1 && est.m_prev == est.m_i) {
    est.kind = DeltaCase::Quiet;
    return est;
  }

  const std::vector<long long> origin{g.vertex_id(0, 0)};
  const std::vector<long long>& prev =
      i == 0 ? origin : outer.gamma(est.m_prev);
  const std::vector<long long>& cur = outer.gamma(est.m_i);
  est.t_pair = crossing_passage(g, outer.field(), prev, cur);
  est.kind = est.on_event ? DeltaCase::Coupled : DeltaCase::Boundary;

  double sum_target = 0.0, sum_source = 0.0;
  Moments diff;
  for (long long k = 0; k < opt.inner; ++k) {
    const WeightField inner_field = sample_weight_field(
        model, g, opt.seed,
        derive_stream(opt.outer_stream, static_cast<uint64_t>(i),
                      static_cast<uint64_t>(k)));
    CrossingOracle inner(g, seq, inner_field, opt.scan_cap);
    if (est.kind == DeltaCase::Coupled) {
      // Shared fresh target: the first fresh crossing past the outer m(i).
      const long long lam = inner.find_m_or_fail(est.m_i + 1);
      if (lam < 0) {
        ++est.inner_discarded;
        continue;
      }
      const std::vector<long long>& fresh = inner.gamma(lam);
      const double a = crossing_passage(g, inner_field, cur, fresh);
      const double b = crossing_passage(g, inner_field, prev, fresh);
      sum_target += a;
      sum_source += b;
      diff.add(a - b);
    } else {
      const long long mu = inner.find_m_or_fail(i0);
      if (mu < 0) {
        ++est.inner_discarded;
        continue;
      }
      const double b =
          crossing_passage(g, inner_field, prev, inner.gamma(mu));
      sum_source += b;
      diff.add(-b);
    }
  }

  est.inner_kept = opt.inner - est.inner_discarded;
  if (est.inner_kept == 0 ||
      static_cast<double>(est.inner_discarded) >
          opt.max_discard_fraction * static_cast<double>(opt.inner))
    throw StatisticalFailure("estimate_delta: too many inner scans failed");

  const double kept = static_cast<double>(est.inner_kept);
  est.inner_mean_target = sum_target / kept;
  est.inner_mean_source = sum_source / kept;
  est.inner_se = diff.count > 1 ? diff.stderr_mean() : 0.0;
  est.delta_hat = est.t_pair + diff.mean;
  return est;
}

MomentReport check_moment_bounds(
    const std::vector<long long>& i_values,
    const std::vector<std::vector<double>>& deltas_per_i, double band_factor,
    bool check_tail, double tail_slope_threshold) {
  if (i_values.empty() || i_values.size() != deltas_per_i.size())
    throw ValidationError("check_moment_bounds: index/sample mismatch");
  for (const auto& row : deltas_per_i)
    if (row.size() < 500)
      throw ValidationError("check_moment_bounds: need >= 500 samples per i");

  MomentReport rep;
  rep.i_values = i_values;
  rep.band_factor = band_factor;
  for (const auto& row : deltas_per_i) {
    double sq = 0.0;
    for (double d : row) sq += d * d;
    rep.second_moments.push_back(sq / static_cast<double>(row.size()));
  }
  rep.lower = *std::min_element(rep.second_moments.begin(),
                                rep.second_moments.end());
  rep.upper = *std::max_element(rep.second_moments.begin(),
                                rep.second_moments.end());
  rep.band_ok = rep.lower > 0.0 && rep.upper < band_factor * rep.lower;

  if (check_tail) {
    std::vector<double> pooled;
    for (const auto& row : deltas_per_i)
      for (double d : row) pooled.push_back(std::fabs(d));
    std::vector<double> lx, ly;
    const double total = static_cast<double>(pooled.size());
    for (int x = 2; x <= 10; ++x) {
      long long hits = 0;
      for (double v : pooled)
        if (v >= static_cast<double>(x)) ++hits;
      if (hits > 0) {
        lx.push_back(std::log(static_cast<double>(x)));
        ly.push_back(std::log(static_cast<double>(hits) / total));
      }
    }
    rep.tail_points = static_cast<long long>(lx.size());
    if (rep.tail_points >= 3) {
      rep.tail_checked = true;
      rep.tail_slope = least_squares(lx, ly).slope;
      rep.tail_ok = rep.tail_slope <= tail_slope_threshold;
    }
  }
  return rep;
}

}  // namespace wedge
