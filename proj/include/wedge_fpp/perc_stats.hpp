#pragma once

#include <cstdint>
#include <vector>

#include "wedge_fpp/stats.hpp"
#include "wedge_fpp/weights.hpp"

namespace wedge {

struct ProbabilityEstimate {
  long long n = 0;
  long long samples = 0;
  long long hits = 0;
  double value = 0.0;
  Interval ci;
  bool rare = false;  // fewer than 10 hits: flagged, not trusted
};

struct MeanEstimate {
  long long n = 0;
  long long samples = 0;
  double mean = 0.0;
  double se = 0.0;
};

struct XiEstimate {
  double p = 0.0;
  long long samples = 0;
  long long n_lo = 0, n_hi = 0;  // fit window
  double slope = 0.0, slope_se = 0.0;
  double xi = 0.0, xi_se = 0.0;
  std::vector<ProbabilityEstimate> points;  // origin to (k,0), k = 1..n_max
};

// All estimators are deterministic in (parameters, seed) and independent of
// the worker count: samples draw from per-index streams and land in integer
// accumulators.

// P(origin connects to the column x = n), cluster exploration confined to
// the box [-n, n] x [-3n, 3n].
ProbabilityEstimate estimate_point_to_plane(double p, long long n,
                                            long long samples, uint64_t seed,
                                            int workers = 1);

// One exploration per sample inside [-n, n] x [-3n, 3n] measures both the
// plane event above and reaching the boundary of the square [-n, n]^2; the
// square event contains the plane event sample by sample.
struct BoxPlanePair {
  ProbabilityEstimate plane;
  ProbabilityEstimate box;
};
BoxPlanePair estimate_point_to_box_and_plane(double p, long long n,
                                             long long samples, uint64_t seed,
                                             int workers = 1);

// Decay rate of origin-to-(k,0) connection probabilities: least squares of
// -log p_hat(k) against k on a window clear of the short-range prefactor
// (start past p_hat < 0.5) and of rare events (keep hits >= 10).
// xi = 1 / slope with a delta-method standard error.
XiEstimate estimate_xi(double p, long long n_max, long long samples,
                       uint64_t seed, int workers = 1);

// Mean number of column-n vertices joined to the origin inside the slab
// [0, n] x [-3n, 3n].
MeanEstimate estimate_Gn(double p, long long n, long long samples,
                         uint64_t seed, int workers = 1);

// Probability that, inside the same slab, the origin's cluster meets column
// 0 in exactly {origin} and column n in exactly one vertex.
ProbabilityEstimate estimate_Hn(double p, long long n, long long samples,
                                uint64_t seed, int workers = 1);

// Left-right open crossing probability of [0, n] x [0, h].
ProbabilityEstimate estimate_rect_crossing(double p, long long n, long long h,
                                           long long samples, uint64_t seed,
                                           int workers = 1);

// Mean max number of edge-disjoint left-right open crossings of
// [0, n] x [0, h].
MeanEstimate estimate_mean_crossing_count(double p, long long n, long long h,
                                          long long samples, uint64_t seed,
                                          int workers = 1);

// Sponge scan: rectangle heights h(n) grown against the measured decay
// length. The driver h(n) e^{-n/xi} tends to 0, to infinity, or stays
// constant depending on the family; the crossing probabilities follow it.
enum class SpongeFamily {
  ShrinkingDriver,  // h = ceil(e^{n/(2 xi)})
  ExplodingDriver,  // h = ceil(e^{3n/(2 xi)})
  ConstantDriver,   // h = ceil(scale * e^{n/xi})
};
enum class SpongeVerdict { ToZero, ToOne, Intermediate, Inconclusive };

struct SpongePoint {
  long long n = 0;
  long long h = 0;
  double driver = 0.0;
  ProbabilityEstimate prob;
};
struct SpongeScan {
  SpongeFamily family = SpongeFamily::ShrinkingDriver;
  double xi_hat = 0.0;
  double scale = 1.0;
  SpongeVerdict verdict = SpongeVerdict::Inconclusive;
  std::vector<SpongePoint> points;
};

// Height for the family at this n (before the memory guard).
long long sponge_height(SpongeFamily family, double xi_hat, double scale,
                        long long n);

// Usable n values (step 4 from n = 4, capped at 48) whose rectangles fit in
// max_cells vertices; fewer than 3 -> ResourceError.
std::vector<long long> sponge_default_n_list(SpongeFamily family,
                                             double xi_hat, double scale,
                                             long long max_cells);

SpongeScan sponge_phase_scan(double p, SpongeFamily family, double xi_hat,
                             double scale, const std::vector<long long>& n_list,
                             long long samples, uint64_t seed,
                             long long max_cells = 50000000, int workers = 1);

const char* sponge_family_name(SpongeFamily f);
const char* sponge_verdict_name(SpongeVerdict v);

}  // namespace wedge
