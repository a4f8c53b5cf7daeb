#pragma once

#include <vector>

#include "wedge_fpp/dual_crossings.hpp"
#include "wedge_fpp/weights.hpp"

namespace wedge {

// Vertex ids of the (w+1)x(h+1) rectangle lattice, row-major.
inline long long rect_vertex(const PercConfig& c, long long x, long long y) {
  return y * (c.w + 1) + x;
}
inline long long rect_vertex_count(const PercConfig& c) {
  return (c.w + 1) * (c.h + 1);
}

// Reusable exploration buffers for one rectangle size. `seen` is allocated
// once and cleaned via the touched list, so repeated samples on a tall
// rectangle do not pay a full clear each time.
struct ClusterScratch {
  std::vector<char> seen;
  std::vector<long long> stack;
  std::vector<long long> touched;
  void ensure(long long vertex_count);
  void undo();
};

// BFS of the union of open clusters of `starts`; appends every reached
// vertex (starts included) to out. Leaves scratch clean.
void open_cluster(const PercConfig& c, const std::vector<long long>& starts,
                  ClusterScratch& scratch, std::vector<long long>& out);

// True iff some open path joins the left side x=0 to the right side x=w.
bool has_left_right_crossing(const PercConfig& c, ClusterScratch& scratch);

// Max number of edge-disjoint open paths between two vertex sets (Menger,
// via unit-capacity max-flow), with vertex-id path certificates.
CrossingCount open_crossing_count(const PercConfig& c,
                                  const std::vector<long long>& sources,
                                  const std::vector<long long>& sinks,
                                  CrossingKind kind);

// Left-right geometry: sources x=0, sinks x=w.
CrossingCount open_left_right_count(const PercConfig& c);

// Independent certificate check: paths open, adjacent, edge-disjoint, with
// endpoints in the given sets; count matches. Throws InternalError.
void check_open_certificate(const PercConfig& c,
                            const std::vector<long long>& sources,
                            const std::vector<long long>& sinks,
                            const CrossingCount& count);

}  // namespace wedge
