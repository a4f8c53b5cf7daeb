#include "wedge_fpp/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/parallel.hpp"
#include "wedge_fpp/rng.hpp"
#include "wedge_fpp/shortest_path.hpp"

namespace wedge {

long long BlockSequence::r_at(long long i) const {
  if (i < 0 || i >= static_cast<long long>(r.size()))
    throw ValidationError("block sequence exhausted");
  return r[static_cast<std::size_t>(i)];
}

long long BlockSequence::r_prime(long long i) const { return r_at(2 * i); }

long long BlockSequence::blocks() const {
  return static_cast<long long>(r.size()) - 2;
}

long long BlockSequence::prime_blocks() const {
  return (static_cast<long long>(r.size()) - 3) / 2;
}

BlockRegion block_region(const BlockSequence& seq, const WedgeGraph& g,
                         long long i) {
  return make_region(g, seq.r_at(i), seq.r_at(i + 1));
}

BlockRegion prime_region(const BlockSequence& seq, const WedgeGraph& g,
                         long long j) {
  return make_region(g, seq.r_at(2 * j), seq.r_at(2 * j + 2));
}

std::vector<long long> split_blocks(long long n, long long d) {
  if (d < 1 || d > n)
    throw ValidationError("split_blocks: need 1 <= d <= n");
  const long long q = n / d, rem = n % d;
  std::vector<long long> widths(static_cast<std::size_t>(q), d);
  widths[0] = d + rem;
  return widths;
}

std::vector<long long> split_blocks_even(long long n, long long M) {
  if (n < 1 || M < 1)
    throw ValidationError("split_blocks_even: need n, M >= 1");
  if (n < M)
    throw ValidationError("split_blocks_even: n < M would force zero widths");
  const long long base = n / M, rem = n % M;
  std::vector<long long> widths(static_cast<std::size_t>(M), base);
  for (long long i = 0; i < rem; ++i) widths[static_cast<std::size_t>(i)] += 1;
  return widths;
}

namespace {

// Levels on demand, cached; ResourceError from level() propagates.
struct LevelCache {
  const WedgeFunction* f;
  std::vector<long long> ell{0};  // ell[0] = 0
  long long get(long long j) {
    while (static_cast<long long>(ell.size()) <= j)
      ell.push_back(level(*f, static_cast<long long>(ell.size())).ell);
    return ell[static_cast<std::size_t>(j)];
  }
};

long long case2a_width(double xi_hat, long long j) {
  const double d = std::exp(static_cast<double>(j + 1) / xi_hat);
  if (!(d < 9.0e15))
    throw ResourceError("build_sequence: block width overflows");
  return static_cast<long long>(std::ceil(d));
}

// Smallest j >= 1 such that the rule holds on the window [j, j+20].
long long find_j0(LevelCache& lv, const std::function<bool(long long)>& ok) {
  for (long long j = 1; j <= 400; ++j) {
    bool all = true;
    for (long long jj = j; jj <= j + 20 && all; ++jj) {
      lv.get(jj + 1);
      all = ok(jj);
    }
    if (all) return j;
  }
  throw ResourceError("build_sequence: no stable level found below 400");
}

void append_breakpoints(std::vector<long long>& r, long long lo, long long hi,
                        long long d) {
  // Splits [lo, hi] by split_blocks and appends interior + right endpoints.
  long long pos = lo;
  for (long long w : split_blocks(hi - lo, d)) {
    pos += w;
    r.push_back(pos);
  }
}

}  // namespace

BlockSequence build_sequence(const WedgeFunction& f, double p, double xi_hat,
                             SequenceRegime regime, long long i_max) {
  if (f.kind != WedgeKind::LogLogLog)
    throw ValidationError(
        "build_sequence: block sequences need the log-log wedge family");
  if (i_max < 2) throw ValidationError("build_sequence: i_max too small");
  BlockSequence seq;
  seq.regime = regime;
  seq.p = p;
  seq.xi_hat = xi_hat;
  LevelCache lv{&f};

  switch (regime) {
    case SequenceRegime::Critical: {
      if (p != 0.5)
        throw ValidationError("build_sequence: Critical regime needs p = 1/2");
      seq.j0 = find_j0(
          lv, [&](long long j) { return lv.get(j + 1) - lv.get(j) >= j; });
      break;
    }
    case SequenceRegime::SubXi: {
      if (!(p > 0.5))
        throw ValidationError("build_sequence: SubXi regime needs p > 1/2");
      if (!(xi_hat > 0.0) || !(f.a < xi_hat))
        throw ValidationError("build_sequence: SubXi regime needs a < xi_hat");
      seq.j0 = find_j0(lv, [&](long long j) {
        const long long d = case2a_width(xi_hat, j);
        return lv.get(j + 1) - lv.get(j) >= d && d >= 6 * j;
      });
      break;
    }
    case SequenceRegime::AtXi: {
      if (!(p > 0.5))
        throw ValidationError("build_sequence: AtXi regime needs p > 1/2");
      if (!(xi_hat > 0.0) || std::fabs(f.a - xi_hat) > 0.1 * xi_hat)
        throw ValidationError(
            "build_sequence: AtXi regime needs a within 10% of xi_hat");
      if (f.b > f.a)
        throw ValidationError("build_sequence: AtXi regime needs b <= a");
      break;
    }
  }

  std::vector<long long>& r = seq.r;
  r.push_back(0);

  if (regime == SequenceRegime::AtXi) {
    // r_i = ell_{j(i)} with j(0)=0, j(1)=1, j(i+1) = j(i) + ceil(j(i)^{b/xi}).
    long long j = 1;
    while (static_cast<long long>(r.size()) <= i_max) {
      const long long v = lv.get(j);
      if (v > r.back()) r.push_back(v);  // jump columns collapse, skip them
      const double step = std::pow(static_cast<double>(j), f.b / xi_hat);
      if (!(step < 9.0e15))
        throw ResourceError("build_sequence: level step overflows");
      j += std::max<long long>(1, static_cast<long long>(std::ceil(step)));
    }
  } else {
    for (long long j = 0; static_cast<long long>(r.size()) <= i_max; ++j) {
      const long long lo = lv.get(j), hi = lv.get(j + 1);
      if (hi == lo) continue;  // jump column: empty level range
      if (j < seq.j0) {
        r.push_back(hi);
      } else {
        const long long d = regime == SequenceRegime::Critical
                                ? j
                                : case2a_width(xi_hat, j);
        if (hi - lo >= d)
          append_breakpoints(r, lo, hi, d);
        else
          r.push_back(hi);  // narrow gap past j0 stays a single block
      }
    }
    if (static_cast<long long>(r.size()) > i_max + 1)
      r.resize(static_cast<std::size_t>(i_max) + 1);
  }

  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i] <= r[i - 1])
      throw InternalError("build_sequence: sequence not strictly increasing");
  return seq;
}

long long iota(const BlockSequence& seq, long long n) {
  if (n < 0) throw ValidationError("iota: n must be >= 0");
  for (long long i = 0; 2 * i < static_cast<long long>(seq.r.size()); ++i)
    if (seq.r[static_cast<std::size_t>(2 * i)] >= n) return i;
  throw ValidationError("iota: block sequence exhausted before n");
}

AssumptionAudit audit_assumptions(const WedgeFunction& f,
                                  const BlockSequence& seq,
                                  const WeightModel& model,
                                  const AuditOptions& opt) {
  if (opt.i_lo < 0 || opt.i_hi < opt.i_lo)
    throw ValidationError("audit_assumptions: bad i range");
  if (opt.i_hi + 1 >= static_cast<long long>(seq.r.size()))
    throw ValidationError("audit_assumptions: sequence shorter than i range");
  if (opt.samples < 20)
    throw ValidationError("audit_assumptions: too few samples");

  const long long n = seq.r_at(opt.i_hi + 1);
  const WedgeGraph g = build_graph(f, n);
  const long long icount = opt.i_hi - opt.i_lo + 1;
  const long long mcount = static_cast<long long>(opt.m_list.size());

  std::vector<long long> a1_hits(static_cast<std::size_t>(icount), 0);
  std::vector<long long> a2_sum(static_cast<std::size_t>(icount), 0);
  std::vector<long long> a2_sumsq(static_cast<std::size_t>(icount), 0);
  std::vector<long long> a3_hits(static_cast<std::size_t>(icount * mcount), 0);
  std::mutex mu;

  parallel_for(opt.samples, opt.workers, [&](long long s) {
    const WeightField field = sample_weight_field(
        model, g, opt.seed,
        derive_stream(0xA0D1ull, static_cast<uint64_t>(s)));
    const OpenFn open = open_from_field(field);

    // One sweep from the origin gives every line value of this field.
    PassageTimeQuery q;
    q.source = PassageTimeQuery::origin();
    q.target = PassageTimeQuery::line(n);
    q.mode = PassageTimeQuery::Mode::Bernoulli;
    const std::vector<double> dist = source_distances(g, field, q);
    const auto line_min = [&](long long col) {
      double best = dist[static_cast<std::size_t>(g.voff[static_cast<std::size_t>(col)])];
      for (long long y = 1; y <= g.heights[static_cast<std::size_t>(col)]; ++y)
        best = std::min(best,
                        dist[static_cast<std::size_t>(g.vertex_id(col, y))]);
      return static_cast<long long>(best);
    };

    std::vector<long long> local_a1(static_cast<std::size_t>(icount), 0);
    std::vector<long long> local_inc(static_cast<std::size_t>(icount), 0);
    std::vector<long long> local_a3(static_cast<std::size_t>(icount * mcount),
                                    0);
    for (long long i = opt.i_lo; i <= opt.i_hi; ++i) {
      const long long k = i - opt.i_lo;
      const BlockRegion region = block_region(seq, g, i);
      if (top_down_crossing_exists(region, open))
        local_a1[static_cast<std::size_t>(k)] = 1;
      local_inc[static_cast<std::size_t>(k)] =
          line_min(seq.r_at(i + 1)) - line_min(seq.r_at(i));

      PassageTimeQuery lq;
      lq.source = PassageTimeQuery::line(seq.r_at(i));
      lq.target = PassageTimeQuery::line(seq.r_at(i + 1));
      lq.mode = PassageTimeQuery::Mode::Bernoulli;
      lq.window_lo = seq.r_at(i);
      lq.window_hi = seq.r_at(i + 1);
      const long long t =
          static_cast<long long>(passage_time(g, field, lq).value);
      for (long long m = 0; m < mcount; ++m)
        if (t >= opt.m_list[static_cast<std::size_t>(m)])
          local_a3[static_cast<std::size_t>(k * mcount + m)] = 1;
    }

    std::lock_guard<std::mutex> lock(mu);
    for (long long k = 0; k < icount; ++k) {
      a1_hits[static_cast<std::size_t>(k)] +=
          local_a1[static_cast<std::size_t>(k)];
      a2_sum[static_cast<std::size_t>(k)] +=
          local_inc[static_cast<std::size_t>(k)];
      a2_sumsq[static_cast<std::size_t>(k)] +=
          local_inc[static_cast<std::size_t>(k)] *
          local_inc[static_cast<std::size_t>(k)];
    }
    for (long long z = 0; z < icount * mcount; ++z)
      a3_hits[static_cast<std::size_t>(z)] +=
          local_a3[static_cast<std::size_t>(z)];
  });

  AssumptionAudit audit;
  audit.m_list = opt.m_list;
  audit.a1_threshold = seq.regime == SequenceRegime::AtXi ? 0.5 : 0.25;
  for (long long i = opt.i_lo; i <= opt.i_hi; ++i) {
    const long long k = i - opt.i_lo;
    audit.i_values.push_back(i);

    ProbabilityEstimate p1;
    p1.n = i;
    p1.samples = opt.samples;
    p1.hits = a1_hits[static_cast<std::size_t>(k)];
    p1.value = static_cast<double>(p1.hits) / opt.samples;
    p1.ci = wilson_ci(p1.hits, opt.samples);
    p1.rare = p1.hits < 10;
    audit.a1.push_back(p1);

    MeanEstimate m2;
    m2.n = i;
    m2.samples = opt.samples;
    m2.mean = static_cast<double>(a2_sum[static_cast<std::size_t>(k)]) /
              opt.samples;
    if (opt.samples > 1) {
      const double var =
          (static_cast<double>(a2_sumsq[static_cast<std::size_t>(k)]) -
           opt.samples * m2.mean * m2.mean) /
          static_cast<double>(opt.samples - 1);
      m2.se = std::sqrt(std::max(0.0, var) / opt.samples);
    }
    audit.a2.push_back(m2);

    std::vector<ProbabilityEstimate> row;
    for (long long m = 0; m < mcount; ++m) {
      ProbabilityEstimate p3;
      p3.n = i;
      p3.samples = opt.samples;
      p3.hits = a3_hits[static_cast<std::size_t>(k * mcount + m)];
      p3.value = static_cast<double>(p3.hits) / opt.samples;
      p3.ci = wilson_ci(p3.hits, opt.samples);
      p3.rare = p3.hits < 10;
      row.push_back(p3);
    }
    audit.a3.push_back(row);
  }

  // A1 verdict: the first index from which every later block clears the
  // threshold, allowing 3 half-widths of slack.
  for (std::size_t k = 0; k < audit.a1.size(); ++k) {
    bool all = true;
    for (std::size_t k2 = k; k2 < audit.a1.size() && all; ++k2) {
      const auto& e = audit.a1[k2];
      const double half = (e.ci.hi - e.ci.lo) / 2.0;
      all = e.value >= audit.a1_threshold - 3.0 * half;
    }
    if (all) {
      audit.audit_index = audit.i_values[k];
      break;
    }
  }
  audit.a1_pass = audit.audit_index >= 0;

  // A2 form: one global constant, then an upper band with factor-4 slack.
  std::vector<double> forms, means;
  std::vector<std::size_t> used;
  for (std::size_t k = 0; k < audit.a2.size(); ++k) {
    const long long i = audit.i_values[k];
    const long long s = seq.r_at(i), t = seq.r_at(i + 1);
    const long long floor_f =
        static_cast<long long>(std::floor(eval_f(f, static_cast<double>(s))));
    double form;
    if (seq.regime == SequenceRegime::Critical) {
      if (floor_f < 1) continue;  // form undefined at the tip
      form = static_cast<double>(t - s) / static_cast<double>(floor_f) + 1.0;
    } else {
      form = static_cast<double>(t - s + floor_f) *
             std::exp(-static_cast<double>(floor_f) / seq.xi_hat);
    }
    forms.push_back(form);
    means.push_back(audit.a2[k].mean);
    used.push_back(k);
  }
  if (!forms.empty()) {
    audit.a2_form_constant = fit_through_origin(forms, means);
    audit.a2_pass = true;
    for (std::size_t z = 0; z < forms.size(); ++z) {
      const double cap =
          4.0 * audit.a2_form_constant * forms[z] + 3.0 * audit.a2[used[z]].se;
      if (means[z] > cap) audit.a2_pass = false;
    }
  }

  // A3 verdict: beyond the audit index every block shows the event at all M.
  audit.a3_pass = audit.audit_index >= 0;
  for (std::size_t k = 0; k < audit.a3.size() && audit.a3_pass; ++k) {
    if (audit.i_values[k] < audit.audit_index) continue;
    for (const auto& e : audit.a3[k])
      if (e.hits < 1) audit.a3_pass = false;
  }
  return audit;
}

}  // namespace wedge
