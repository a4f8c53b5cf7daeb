#include "wedge_fpp/perc_stats.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <mutex>

#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/parallel.hpp"
#include "wedge_fpp/rect_perc.hpp"
#include "wedge_fpp/rng.hpp"

namespace wedge {

namespace {

constexpr uint64_t kStreamPlane = 0x70a1;
constexpr uint64_t kStreamBoxPlane = 0x70a2;
constexpr uint64_t kStreamXi = 0x70a3;
constexpr uint64_t kStreamGn = 0x70a4;
constexpr uint64_t kStreamHn = 0x70a5;
constexpr uint64_t kStreamRect = 0x70a6;
constexpr uint64_t kStreamCount = 0x70a7;

ProbabilityEstimate finish_probability(long long n, long long samples,
                                       long long hits) {
  ProbabilityEstimate e;
  e.n = n;
  e.samples = samples;
  e.hits = hits;
  e.value = samples > 0 ? static_cast<double>(hits) / samples : 0.0;
  e.ci = wilson_ci(hits, samples);
  e.rare = hits < 10;
  return e;
}

void validate_common(double p, long long n, long long samples) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("estimator: p outside [0,1]");
  if (n < 1) throw ValidationError("estimator: n must be >= 1");
  if (samples < 1) throw ValidationError("estimator: samples must be >= 1");
}

// Rectangle lattice placed at lattice coordinates [x0,x1] x [y0,y1].
struct Box {
  PercConfig cfg;
  long long x0, y0;
  long long vid(long long x, long long y) const {
    return (y - y0) * (cfg.w + 1) + (x - x0);
  }
  long long vx(long long v) const { return v % (cfg.w + 1) + x0; }
  long long vy(long long v) const { return v / (cfg.w + 1) + y0; }
};

Box make_box(double p, long long x0, long long x1, long long y0, long long y1,
             uint64_t seed, uint64_t stream) {
  return Box{sample_rectangle_config(x1 - x0, y1 - y0, p, seed, stream), x0,
             y0};
}

struct SampleBuffers {
  ClusterScratch scratch;
  std::vector<long long> cluster;
};

SampleBuffers& local_buffers() {
  thread_local SampleBuffers b;
  b.cluster.clear();
  return b;
}

}  // namespace

ProbabilityEstimate estimate_point_to_plane(double p, long long n,
                                            long long samples, uint64_t seed,
                                            int workers) {
  validate_common(p, n, samples);
  std::atomic<long long> hits{0};
  parallel_for(samples, workers, [&](long long i) {
    SampleBuffers& b = local_buffers();
    const Box box =
        make_box(p, -n, n, -3 * n, 3 * n, seed,
                 derive_stream(kStreamPlane, static_cast<uint64_t>(n),
                               static_cast<uint64_t>(i)));
    open_cluster(box.cfg, {box.vid(0, 0)}, b.scratch, b.cluster);
    for (long long v : b.cluster)
      if (box.vx(v) == n) {
        hits.fetch_add(1, std::memory_order_relaxed);
        break;
      }
  });
  return finish_probability(n, samples, hits.load());
}

BoxPlanePair estimate_point_to_box_and_plane(double p, long long n,
                                             long long samples, uint64_t seed,
                                             int workers) {
  validate_common(p, n, samples);
  std::atomic<long long> plane_hits{0}, box_hits{0};
  parallel_for(samples, workers, [&](long long i) {
    SampleBuffers& b = local_buffers();
    const Box box =
        make_box(p, -n, n, -3 * n, 3 * n, seed,
                 derive_stream(kStreamBoxPlane, static_cast<uint64_t>(n),
                               static_cast<uint64_t>(i)));
    open_cluster(box.cfg, {box.vid(0, 0)}, b.scratch, b.cluster);
    bool plane = false, square = false;
    for (long long v : b.cluster) {
      const long long x = box.vx(v), y = box.vy(v);
      if (x == n) plane = true;
      // Boundary of [-n,n]^2: first touch happens before leaving it, so the
      // taller exploration box measures the same event.
      if ((std::llabs(x) == n && std::llabs(y) <= n) ||
          (std::llabs(y) == n && std::llabs(x) <= n))
        square = true;
      if (plane && square) break;
    }
    if (plane) plane_hits.fetch_add(1, std::memory_order_relaxed);
    if (square) box_hits.fetch_add(1, std::memory_order_relaxed);
  });
  BoxPlanePair out;
  out.plane = finish_probability(n, samples, plane_hits.load());
  out.box = finish_probability(n, samples, box_hits.load());
  return out;
}

XiEstimate estimate_xi(double p, long long n_max, long long samples,
                       uint64_t seed, int workers) {
  if (!(p > 0.0 && p < 0.5))
    throw ValidationError("estimate_xi: needs 0 < p < 1/2");
  if (n_max < 4) throw ValidationError("estimate_xi: n_max too small");
  if (samples < 100) throw ValidationError("estimate_xi: too few samples");

  std::vector<long long> counts(static_cast<std::size_t>(n_max) + 1, 0);
  std::mutex mu;
  parallel_for(samples, workers, [&](long long i) {
    SampleBuffers& b = local_buffers();
    const Box box =
        make_box(p, -n_max, 2 * n_max, -3 * n_max, 3 * n_max, seed,
                 derive_stream(kStreamXi, static_cast<uint64_t>(n_max),
                               static_cast<uint64_t>(i)));
    open_cluster(box.cfg, {box.vid(0, 0)}, b.scratch, b.cluster);
    thread_local std::vector<char> hit;
    hit.assign(static_cast<std::size_t>(n_max) + 1, 0);
    for (long long v : b.cluster) {
      const long long x = box.vx(v);
      if (box.vy(v) == 0 && x >= 1 && x <= n_max)
        hit[static_cast<std::size_t>(x)] = 1;
    }
    std::lock_guard<std::mutex> lock(mu);
    for (long long k = 1; k <= n_max; ++k)
      counts[static_cast<std::size_t>(k)] += hit[static_cast<std::size_t>(k)];
  });

  XiEstimate est;
  est.p = p;
  est.samples = samples;
  for (long long k = 1; k <= n_max; ++k)
    est.points.push_back(finish_probability(
        k, samples, counts[static_cast<std::size_t>(k)]));

  long long n0 = -1, n1 = -1;
  for (const auto& pt : est.points)
    if (pt.value < 0.5) {
      n0 = pt.n;
      break;
    }
  for (const auto& pt : est.points)
    if (pt.hits >= 10) n1 = pt.n;
  if (n0 < 0 || n1 < n0 + 2)
    throw StatisticalFailure(
        "estimate_xi: no usable fit window; raise samples or n_max");

  std::vector<double> xs, ys;
  for (const auto& pt : est.points)
    if (pt.n >= n0 && pt.n <= n1 && pt.hits >= 10) {
      xs.push_back(static_cast<double>(pt.n));
      ys.push_back(-std::log(pt.value));
    }
  if (xs.size() < 3)
    throw StatisticalFailure("estimate_xi: fit window thinner than 3 points");
  const LineFit fit = least_squares(xs, ys);
  if (fit.slope <= 0.0)
    throw StatisticalFailure("estimate_xi: nonpositive decay slope");
  est.n_lo = n0;
  est.n_hi = n1;
  est.slope = fit.slope;
  est.slope_se = fit.slope_se;
  est.xi = 1.0 / fit.slope;
  est.xi_se = fit.slope_se / (fit.slope * fit.slope);
  return est;
}

MeanEstimate estimate_Gn(double p, long long n, long long samples,
                         uint64_t seed, int workers) {
  validate_common(p, n, samples);
  std::atomic<long long> sum{0}, sumsq{0};
  parallel_for(samples, workers, [&](long long i) {
    SampleBuffers& b = local_buffers();
    const Box box =
        make_box(p, 0, n, -3 * n, 3 * n, seed,
                 derive_stream(kStreamGn, static_cast<uint64_t>(n),
                               static_cast<uint64_t>(i)));
    open_cluster(box.cfg, {box.vid(0, 0)}, b.scratch, b.cluster);
    long long c = 0;
    for (long long v : b.cluster)
      if (box.vx(v) == n) ++c;
    sum.fetch_add(c, std::memory_order_relaxed);
    sumsq.fetch_add(c * c, std::memory_order_relaxed);
  });
  MeanEstimate out;
  out.n = n;
  out.samples = samples;
  out.mean = static_cast<double>(sum.load()) / static_cast<double>(samples);
  if (samples > 1) {
    const double var = (static_cast<double>(sumsq.load()) -
                        static_cast<double>(samples) * out.mean * out.mean) /
                       static_cast<double>(samples - 1);
    out.se = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
  }
  return out;
}

ProbabilityEstimate estimate_Hn(double p, long long n, long long samples,
                                uint64_t seed, int workers) {
  validate_common(p, n, samples);
  std::atomic<long long> hits{0};
  parallel_for(samples, workers, [&](long long i) {
    SampleBuffers& b = local_buffers();
    const Box box =
        make_box(p, 0, n, -3 * n, 3 * n, seed,
                 derive_stream(kStreamHn, static_cast<uint64_t>(n),
                               static_cast<uint64_t>(i)));
    open_cluster(box.cfg, {box.vid(0, 0)}, b.scratch, b.cluster);
    long long c0 = 0, cn = 0;
    for (long long v : b.cluster) {
      const long long x = box.vx(v);
      if (x == 0) ++c0;
      if (x == n) ++cn;
    }
    if (c0 == 1 && cn == 1) hits.fetch_add(1, std::memory_order_relaxed);
  });
  return finish_probability(n, samples, hits.load());
}

ProbabilityEstimate estimate_rect_crossing(double p, long long n, long long h,
                                           long long samples, uint64_t seed,
                                           int workers) {
  validate_common(p, n, samples);
  if (h < 1) throw ValidationError("estimate_rect_crossing: h must be >= 1");
  std::atomic<long long> hits{0};
  parallel_for(samples, workers, [&](long long i) {
    thread_local ClusterScratch scratch;
    const PercConfig cfg = sample_rectangle_config(
        n, h, p, seed,
        derive_stream(kStreamRect,
                      (static_cast<uint64_t>(n) << 32) |
                          static_cast<uint64_t>(h),
                      static_cast<uint64_t>(i)));
    if (has_left_right_crossing(cfg, scratch))
      hits.fetch_add(1, std::memory_order_relaxed);
  });
  return finish_probability(n, samples, hits.load());
}

MeanEstimate estimate_mean_crossing_count(double p, long long n, long long h,
                                          long long samples, uint64_t seed,
                                          int workers) {
  validate_common(p, n, samples);
  if (h < 1)
    throw ValidationError("estimate_mean_crossing_count: h must be >= 1");
  std::atomic<long long> sum{0}, sumsq{0};
  parallel_for(samples, workers, [&](long long i) {
    const PercConfig cfg = sample_rectangle_config(
        n, h, p, seed,
        derive_stream(kStreamCount,
                      (static_cast<uint64_t>(n) << 32) |
                          static_cast<uint64_t>(h),
                      static_cast<uint64_t>(i)));
    const long long c = open_left_right_count(cfg).value;
    sum.fetch_add(c, std::memory_order_relaxed);
    sumsq.fetch_add(c * c, std::memory_order_relaxed);
  });
  MeanEstimate out;
  out.n = n;
  out.samples = samples;
  out.mean = static_cast<double>(sum.load()) / static_cast<double>(samples);
  if (samples > 1) {
    const double var = (static_cast<double>(sumsq.load()) -
                        static_cast<double>(samples) * out.mean * out.mean) /
                       static_cast<double>(samples - 1);
    out.se = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
  }
  return out;
}

long long sponge_height(SpongeFamily family, double xi_hat, double scale,
                        long long n) {
  if (!(xi_hat > 0.0)) throw ValidationError("sponge: xi_hat must be > 0");
  if (!(scale > 0.0)) throw ValidationError("sponge: scale must be > 0");
  if (n < 1) throw ValidationError("sponge: n must be >= 1");
  double exponent = 0.0, mult = 1.0;
  switch (family) {
    case SpongeFamily::ShrinkingDriver:
      exponent = static_cast<double>(n) / (2.0 * xi_hat);
      break;
    case SpongeFamily::ExplodingDriver:
      exponent = 3.0 * static_cast<double>(n) / (2.0 * xi_hat);
      break;
    case SpongeFamily::ConstantDriver:
      exponent = static_cast<double>(n) / xi_hat;
      mult = scale;
      break;
  }
  const double h = mult * std::exp(exponent);
  if (!(h < 1.0e18))
    throw ResourceError("sponge: rectangle height overflows the budget");
  return std::max<long long>(1, static_cast<long long>(std::ceil(h)));
}

std::vector<long long> sponge_default_n_list(SpongeFamily family,
                                             double xi_hat, double scale,
                                             long long max_cells) {
  std::vector<long long> out;
  for (long long n = 4; n <= 48; n += 4) {
    double h;
    try {
      h = static_cast<double>(sponge_height(family, xi_hat, scale, n));
    } catch (const ResourceError&) {
      break;
    }
    const double cells = static_cast<double>(n + 1) * (h + 1.0);
    if (cells > static_cast<double>(max_cells)) break;
    out.push_back(n);
  }
  if (out.size() < 3)
    throw ResourceError(
        "sponge: fewer than 3 scan points fit the memory budget");
  return out;
}

SpongeScan sponge_phase_scan(double p, SpongeFamily family, double xi_hat,
                             double scale, const std::vector<long long>& n_list,
                             long long samples, uint64_t seed,
                             long long max_cells, int workers) {
  if (n_list.empty()) throw ValidationError("sponge: empty n list");
  SpongeScan scan;
  scan.family = family;
  scan.xi_hat = xi_hat;
  scan.scale = scale;
  for (long long n : n_list) {
    SpongePoint pt;
    pt.n = n;
    pt.h = sponge_height(family, xi_hat, scale, n);
    if ((n + 1) * (pt.h + 1) > max_cells)
      throw ResourceError("sponge: rectangle exceeds the memory budget");
    pt.driver = static_cast<double>(pt.h) *
                std::exp(-static_cast<double>(n) / xi_hat);
    const uint64_t family_seed =
        mix64(seed ^ (0x5B000ull + static_cast<uint64_t>(family)));
    pt.prob = estimate_rect_crossing(p, n, pt.h, samples, family_seed, workers);
    scan.points.push_back(pt);
  }

  const auto half = [](const ProbabilityEstimate& e) {
    return (e.ci.hi - e.ci.lo) / 2.0;
  };
  bool noisy_dec = true, noisy_inc = true, banded = true;
  for (std::size_t i = 1; i < scan.points.size(); ++i) {
    const auto& prev = scan.points[i - 1].prob;
    const auto& cur = scan.points[i].prob;
    if (cur.value > prev.value + half(cur) + half(prev)) noisy_dec = false;
    if (cur.value < prev.value - half(cur) - half(prev)) noisy_inc = false;
  }
  for (const auto& pt : scan.points)
    if (pt.prob.value < 0.05 || pt.prob.value > 0.95) banded = false;

  const double first = scan.points.front().prob.value;
  const double last = scan.points.back().prob.value;
  if (noisy_dec && last < 0.1 && first >= last)
    scan.verdict = SpongeVerdict::ToZero;
  else if (noisy_inc && last > 0.9 && last >= first)
    scan.verdict = SpongeVerdict::ToOne;
  else if (banded)
    scan.verdict = SpongeVerdict::Intermediate;
  else
    scan.verdict = SpongeVerdict::Inconclusive;
  return scan;
}

const char* sponge_family_name(SpongeFamily f) {
  switch (f) {
    case SpongeFamily::ShrinkingDriver:
      return "shrinking-driver";
    case SpongeFamily::ExplodingDriver:
      return "exploding-driver";
    case SpongeFamily::ConstantDriver:
      return "constant-driver";
  }
  return "unknown";
}

const char* sponge_verdict_name(SpongeVerdict v) {
  switch (v) {
    case SpongeVerdict::ToZero:
      return "to_zero";
    case SpongeVerdict::ToOne:
      return "to_one";
    case SpongeVerdict::Intermediate:
      return "intermediate";
    case SpongeVerdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

}  // namespace wedge
