#pragma once

#include <cstdint>
#include <vector>

#include "wedge_fpp/perc_stats.hpp"
#include "wedge_fpp/region.hpp"
#include "wedge_fpp/wedge_function.hpp"
#include "wedge_fpp/weights.hpp"

namespace wedge {

enum class SequenceRegime {
  Critical,  // p = 1/2: level gaps split into width-j blocks
  SubXi,     // p > 1/2, a < xi: widths follow d_j = ceil(e^{(j+1)/xi})
  AtXi,      // p > 1/2, a = xi (within tolerance), b <= a: r_i = ell_{j(i)}
};

struct BlockSequence {
  std::vector<long long> r;  // strictly increasing, r[0] = 0
  SequenceRegime regime = SequenceRegime::Critical;
  double p = 0.5;
  double xi_hat = 0.0;
  long long j0 = 0;  // first level handled by the asymptotic rule

  long long r_at(long long i) const;        // r_i, bounds-checked
  long long r_prime(long long i) const;     // r_{2i}
  long long blocks() const;                 // largest valid block index of R_i
  long long prime_blocks() const;           // largest valid index of R'_j
};

// Columns [r_i, r_{i+1}].
BlockRegion block_region(const BlockSequence& seq, const WedgeGraph& g,
                         long long i);
// Columns [r_{2j}, r_{2j+2}].
BlockRegion prime_region(const BlockSequence& seq, const WedgeGraph& g,
                         long long j);

// Widths q = floor(n/d): first d + (n mod d), the rest d; all in [d, 2d-1].
std::vector<long long> split_blocks(long long n, long long d);

// Exactly M widths: the first (n mod M) are floor(n/M)+1, the rest
// floor(n/M). Zero widths are forbidden, so n >= M is required.
std::vector<long long> split_blocks_even(long long n, long long M);

// Builds r_0 < r_1 < ... (at least i_max + 1 entries) for the regime.
// xi_hat is the decay length measured at 1 - p; it is ignored for Critical.
BlockSequence build_sequence(const WedgeFunction& f, double p, double xi_hat,
                             SequenceRegime regime, long long i_max);

// min { i : r_{2i} >= n }.
long long iota(const BlockSequence& seq, long long n);

struct AssumptionAudit {
  std::vector<long long> i_values;
  std::vector<ProbabilityEstimate> a1;  // top-down crossing prob of R_i
  std::vector<MeanEstimate> a2;         // paired mean passage increment
  std::vector<std::vector<ProbabilityEstimate>> a3;  // per i, per M
  std::vector<long long> m_list;

  double a1_threshold = 0.25;
  long long audit_index = -1;  // first i from which A1 clears its threshold
  double a2_form_constant = 0.0;
  bool a1_pass = false;
  bool a2_pass = false;
  bool a3_pass = false;
};

struct AuditOptions {
  long long i_lo = 0;
  long long i_hi = 0;
  long long samples = 200;
  std::vector<long long> m_list = {1, 2};
  uint64_t seed = 12345;
  int workers = 1;
};

// Estimates A1 (crossing probability of each R_i), A2 (mean increment of the
// Bernoulli passage time between consecutive r-lines, paired on one field
// per sample), and A3 (tail of the line-to-line passage time), then fits
// the A2 increment form for the regime with one global constant and checks
// the upper band.
AssumptionAudit audit_assumptions(const WedgeFunction& f,
                                  const BlockSequence& seq,
                                  const WeightModel& model,
                                  const AuditOptions& opt);

}  // namespace wedge
