#include "wedge_fpp/weights.hpp"

#include <cmath>
#include <limits>

#include "wedge_fpp/errors.hpp"

namespace wedge {

WeightModel WeightModel::constant(double p, double delta) {
  WeightModel m;
  m.p = p;
  m.delta = delta;
  m.law = PositiveLaw::ConstantAtDelta;
  m.eta = std::numeric_limits<double>::infinity();
  m.validate();
  return m;
}

WeightModel WeightModel::shifted_exponential(double p, double delta,
                                             double rate) {
  WeightModel m;
  m.p = p;
  m.delta = delta;
  m.law = PositiveLaw::ShiftedExponential;
  m.rate = rate;
  m.eta = std::numeric_limits<double>::infinity();
  m.validate();
  return m;
}

WeightModel WeightModel::pareto(double p, double delta, double exponent) {
  WeightModel m;
  m.p = p;
  m.delta = delta;
  m.law = PositiveLaw::ParetoTail;
  m.exponent = exponent;
  // Moments of order below the tail exponent are finite.
  m.eta = exponent;
  m.validate();
  return m;
}

void WeightModel::validate() const {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("weight model: p must be in [0,1]");
  if (!(delta > 0.0))
    throw ValidationError("weight model: delta must be > 0");
  if (law == PositiveLaw::ShiftedExponential && !(rate > 0.0))
    throw ValidationError("weight model: rate must be > 0");
  if (law == PositiveLaw::ParetoTail && !(exponent > 0.0))
    throw ValidationError("weight model: tail exponent must be > 0");
}

std::string WeightModel::law_name() const {
  switch (law) {
    case PositiveLaw::ConstantAtDelta: return "constant";
    case PositiveLaw::ShiftedExponential: return "shifted-exp";
    case PositiveLaw::ParetoTail: return "pareto";
  }
  return "unknown";
}

namespace {

double positive_draw(const WeightModel& m, double u) {
  switch (m.law) {
    case PositiveLaw::ConstantAtDelta:
      return m.delta;
    case PositiveLaw::ShiftedExponential:
      // delta + Exp(rate); support [delta, inf).
      return m.delta - std::log1p(-u) / m.rate;
    case PositiveLaw::ParetoTail:
      // delta * (1-u)^(-1/exponent); support [delta, inf).
      return m.delta * std::pow(1.0 - u, -1.0 / m.exponent);
  }
  throw InternalError("positive_draw: unknown law");
}

}  // namespace

double WeightField::tau_prime(long long e) const {
  const Philox4x64 gen(seed, stream);
  const CounterBlock blk = gen.block(static_cast<std::uint64_t>(e), 0);
  return positive_draw(model, u01(blk.w[1]));
}

WeightField sample_weight_field(const WeightModel& model, const WedgeGraph& g,
                                std::uint64_t seed, std::uint64_t stream) {
  model.validate();
  WeightField field;
  field.graph = &g;
  field.model = model;
  field.seed = seed;
  field.stream = stream;
  field.t_bits.assign(static_cast<std::size_t>((g.edge_count + 63) / 64), 0);
  const Philox4x64 gen(seed, stream);
  for (long long e = 0; e < g.edge_count; ++e) {
    const CounterBlock blk = gen.block(static_cast<std::uint64_t>(e), 0);
    if (!(u01(blk.w[0]) < model.p))
      field.t_bits[static_cast<std::size_t>(e >> 6)] |=
          (1ull << (static_cast<unsigned>(e) & 63u));
  }
  return field;
}

PercConfig sample_rectangle_config(long long w, long long h, double p_open,
                                   std::uint64_t seed, std::uint64_t stream) {
  if (w < 1 || h < 1)
    throw ValidationError("rectangle config: dimensions must be >= 1");
  if (!(p_open >= 0.0 && p_open <= 1.0))
    throw ValidationError("rectangle config: p must be in [0,1]");
  PercConfig c;
  c.w = w;
  c.h = h;
  c.p_open = p_open;
  c.seed = seed;
  c.stream = stream;
  return c;
}

}  // namespace wedge
