#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wedge_fpp/rng.hpp"
#include "wedge_fpp/wedge_graph.hpp"

namespace wedge {

enum class PositiveLaw { ConstantAtDelta, ShiftedExponential, ParetoTail };

// Edge-weight law under the gap condition: tau_e = t_e * tau'_e with
// P(t_e = 0) = p and tau' supported on [delta, inf), independent of t.
// So F(0) = F(delta) = p for the law of tau.
struct WeightModel {
  double p = 0.5;
  double delta = 1.0;
  PositiveLaw law = PositiveLaw::ConstantAtDelta;
  double rate = 1.0;      // ShiftedExponential: tau' = delta + Exp(rate)
  double exponent = 4.5;  // ParetoTail: P(tau' > x) = (x/delta)^(-exponent)
  double eta = 0.0;       // finite-moment order available, for diagnostics

  // p = 1 is allowed as the degenerate all-zero field.
  static WeightModel constant(double p, double delta = 1.0);
  static WeightModel shifted_exponential(double p, double delta, double rate);
  static WeightModel pareto(double p, double delta, double exponent);

  void validate() const;
  std::string law_name() const;
};

// Coupled field on a wedge graph. The t bits are materialized densely; tau'
// is recomputed on demand from the same per-edge counter block, so the field
// never stores a real per edge.
struct WeightField {
  const WedgeGraph* graph = nullptr;
  WeightModel model;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<std::uint64_t> t_bits;  // packed, 1 bit per edge

  int t(long long e) const {
    return static_cast<int>((t_bits[static_cast<std::size_t>(e >> 6)] >>
                             (static_cast<unsigned>(e) & 63u)) & 1u);
  }
  // Crossing convention: an edge is open when its Bernoulli weight vanishes.
  bool open(long long e) const { return t(e) == 0; }
  bool closed(long long e) const { return t(e) == 1; }

  double tau_prime(long long e) const;
  double tau(long long e) const { return t(e) == 0 ? 0.0 : tau_prime(e); }
};

WeightField sample_weight_field(const WeightModel& model, const WedgeGraph& g,
                                std::uint64_t seed, std::uint64_t stream);

// Plain Bernoulli configuration on the rectangle [0,w] x [0,h]. Here open
// means omega(e) = 1, the usual percolation convention. Bits are evaluated
// lazily from the counter RNG; nothing is stored per edge.
struct PercConfig {
  long long w = 0;
  long long h = 0;
  double p_open = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  long long horizontal_count() const { return w * (h + 1); }
  long long vertical_count() const { return (w + 1) * h; }
  long long edge_count() const { return horizontal_count() + vertical_count(); }

  // Horizontal edge (x,y)-(x+1,y), x < w, y <= h.
  long long hedge(long long x, long long y) const { return y * w + x; }
  // Vertical edge (x,y)-(x,y+1), x <= w, y < h.
  long long vedge(long long x, long long y) const {
    return horizontal_count() + y * (w + 1) + x;
  }

  bool open(long long e) const {
    const Philox4x64 gen(seed, stream);
    return u01(gen.word(static_cast<std::uint64_t>(e), 0, 0)) < p_open;
  }
};

PercConfig sample_rectangle_config(long long w, long long h, double p_open,
                                   std::uint64_t seed, std::uint64_t stream);

}  // namespace wedge
