#pragma once

#include <vector>

#include "wedge_fpp/weights.hpp"

namespace wedge {

// Endpoints are a single vertex, a vertical line P(r) = {x1 = r}, or an
// explicit vertex set (a stored crossing). Mode picks the weight: Bernoulli
// uses t_e (0/1), General uses tau_e = t_e * tau'_e.
struct PassageTimeQuery {
  enum class Kind { Vertex, Line, Crossing };
  enum class Mode { General, Bernoulli };

  struct Endpoint {
    Kind kind = Kind::Vertex;
    long long x = 0;
    long long y = 0;
    std::vector<long long> vertices;  // Crossing: graph vertex ids
  };

  static Endpoint origin() { return Endpoint{Kind::Vertex, 0, 0, {}}; }
  static Endpoint vertex(long long x, long long y) {
    return Endpoint{Kind::Vertex, x, y, {}};
  }
  static Endpoint line(long long r) { return Endpoint{Kind::Line, r, 0, {}}; }
  static Endpoint crossing(std::vector<long long> ids) {
    Endpoint e;
    e.kind = Kind::Crossing;
    e.vertices = std::move(ids);
    return e;
  }

  Endpoint source;
  Endpoint target;
  Mode mode = Mode::Bernoulli;

  // Search restricted to columns [window_lo, window_hi]; -1 means column n.
  // First-hit arguments make the restriction exact for 0 -> P(r) queries with
  // window [0, r], for line-to-line queries on their slab, and for
  // crossing-to-crossing queries on their spanning column range.
  long long window_lo = 0;
  long long window_hi = -1;
};

struct PassageTimeResult {
  double value = 0.0;
  std::vector<long long> path;  // vertex ids from source to target
  long long target_vertex = -1;
};

PassageTimeResult passage_time(const WedgeGraph& g, const WeightField& field,
                               const PassageTimeQuery& query);

// Distances from the query's source set to every vertex inside the window
// (unreachable or out-of-window entries are +infinity). Used by callers that
// need several line values from one sweep.
std::vector<double> source_distances(const WedgeGraph& g,
                                     const WeightField& field,
                                     const PassageTimeQuery& query);

}  // namespace wedge
