#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wedge_fpp/region.hpp"
#include "wedge_fpp/sequences.hpp"
#include "wedge_fpp/weights.hpp"

namespace wedge {

// Lazily answers, for one fixed field, which prime blocks carry a top-down
// open crossing, memoizing the answers and the leftmost crossings. A prime
// block index j is usable when both the sequence (r_{2j+2}) and the graph
// (columns up to r_{2j+2}) cover it.
class CrossingOracle {
 public:
  CrossingOracle(const WedgeGraph& g, const BlockSequence& seq,
                 const WeightField& field, long long scan_cap = 50);

  // Smallest j >= i whose prime region has a top-down open crossing. The scan
  // visits at most scan_cap + 1 blocks and never passes the last usable one;
  // find_m throws ResourceError where find_m_or_fail reports -1.
  long long find_m(long long i);
  long long find_m_or_fail(long long i);

  bool block_has_crossing(long long j);
  // Leftmost top-down open crossing of prime block j, top vertex first.
  const std::vector<long long>& gamma(long long j);

  long long last_prime_index() const { return last_prime_; }
  const WedgeGraph& graph() const { return *g_; }
  const BlockSequence& sequence() const { return *seq_; }
  const WeightField& field() const { return *field_; }

 private:
  const WedgeGraph* g_;
  const BlockSequence* seq_;
  const WeightField* field_;
  OpenFn open_;
  long long cap_;
  long long last_prime_ = -1;
  std::unordered_map<long long, char> exists_;  // 1 = crossing, 2 = none
  std::unordered_map<long long, std::vector<long long>> gamma_;
};

struct CrossingState {
  long long i = 0;
  long long m_i = 0;                // first crossed prime block at or past i
  std::vector<long long> gamma;     // its leftmost crossing
  long long interior_area = 0;      // faces west of gamma inside the block
};

CrossingState crossing_state(CrossingOracle& oracle, long long i);

// General-weight passage time between two stored vertex sets, restricted to
// the column window spanned by them. When the source is a crossing lying
// weakly west of the target (or the origin), separation makes the window
// restriction exact: a geodesic cannot leave the spanned columns.
double crossing_passage(const WedgeGraph& g, const WeightField& field,
                        const std::vector<long long>& source,
                        const std::vector<long long>& target);

// Passage time from the origin to the crossing of the first crossed prime
// block at or past i0, in the oracle's own field.
double origin_to_crossing_time(CrossingOracle& oracle, long long i0);

// One martingale increment of the origin-to-crossing time, estimated by
// nested Monte Carlo with fresh inner fields.
enum class DeltaCase {
  Coupled,   // both consecutive crossings settle before block i0
  Boundary,  // the previous crossing settles before i0, the current does not
  Quiet,     // no new crossing information: the increment is exactly zero
};

struct DeltaEstimate {
  long long i = 0;
  long long i0 = 0;
  long long m_i = 0;     // outer m(i)
  long long m_prev = 0;  // outer m(i-1); equal to m_i when i = 0
  bool on_event = false;       // m(i) < i0
  bool on_prev_event = false;  // m(i-1) < i0; vacuously true when i = 0

  double t_pair = 0.0;             // outer passage between the two crossings
  double inner_mean_target = 0.0;  // mean inner passage into the current set
  double inner_mean_source = 0.0;  // mean inner passage into the previous set
  double inner_se = 0.0;           // standard error of the inner correction
  long long inner_kept = 0;
  long long inner_discarded = 0;

  DeltaCase kind = DeltaCase::Quiet;
  double delta_hat = 0.0;
};

struct DeltaOptions {
  long long inner = 256;   // fresh fields per outer field
  long long scan_cap = 50;
  uint64_t seed = 12345;   // inner stream = (seed, h(outer_stream, i, k))
  uint64_t outer_stream = 0;
  double max_discard_fraction = 0.10;
};

// Computes the increment for index i of the telescoped decomposition of the
// origin-to-crossing time at i0, on the oracle's outer field. Inner fields
// whose crossing scans fail are discarded; more than the allowed fraction
// raises StatisticalFailure. The outer scans themselves must succeed, so the
// sequence and graph need slack beyond i0.
DeltaEstimate estimate_delta(CrossingOracle& outer, long long i, long long i0,
                             const DeltaOptions& opt);

struct MomentReport {
  std::vector<long long> i_values;
  std::vector<double> second_moments;
  double lower = 0.0;  // smallest second moment
  double upper = 0.0;  // largest second moment
  double band_factor = 20.0;
  bool band_ok = false;  // lower > 0 and upper < band_factor * lower

  bool tail_checked = false;
  double tail_slope = 0.0;  // log-log slope of the pooled |delta| tail
  long long tail_points = 0;
  bool tail_ok = true;  // vacuous when the tail was not checked
};

// Second-moment band over the supplied indices (each row needs >= 500
// samples) and, optionally, a pooled tail-decay check of the complementary
// CDF of |delta| on the grid x = 2..10; fewer than three populated grid
// points leave the tail check vacuous.
MomentReport check_moment_bounds(
    const std::vector<long long>& i_values,
    const std::vector<std::vector<double>>& deltas_per_i,
    double band_factor = 20.0, bool check_tail = false,
    double tail_slope_threshold = -1.0);

}  // namespace wedge
