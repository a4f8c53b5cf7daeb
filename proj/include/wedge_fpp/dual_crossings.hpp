#pragma once

#include <vector>

#include "wedge_fpp/wedge_graph.hpp"
#include "wedge_fpp/weights.hpp"

namespace wedge {

enum class CrossingKind {
  DualTopDown,    // closed dual paths, full top boundary to bottom boundary
  DualFromLevel,  // closed dual paths from one top-boundary level
  OpenLeftRight,  // open crossings of a rectangle, left side to right side
  OpenPointSets,  // open paths between two prescribed vertex sets
};

using DualPath = std::vector<DualPoint>;

struct CrossingCount {
  long long value = 0;
  CrossingKind kind = CrossingKind::DualTopDown;
  std::vector<DualPath> certificate;  // edge-disjoint witnesses, one per unit
};

// True when u,v are adjacent dual points whose shared dual edge crosses an
// edge of the wedge graph.
bool dual_edge_exists(const WedgeGraph& g, DualPoint u, DualPoint v);
// Id of that crossed wedge edge.
long long dual_edge_primal_id(const WedgeGraph& g, DualPoint u, DualPoint v);

// Max number of edge-disjoint paths of closed dual edges from the top
// boundary to the bottom boundary, with a certificate. Equals the Bernoulli
// passage time from the origin to the last column, which the tests assert.
CrossingCount dual_separating_count(const WedgeGraph& g,
                                    const WeightField& field);

// Same count with the sources restricted to top-boundary level j.
// Levels without top-boundary points give 0.
CrossingCount dual_level_count(const WedgeGraph& g, const WeightField& field,
                               long long j);

// Independent validity check of a dual certificate: consecutive points are
// dual-adjacent, every crossed edge is closed, paths are pairwise
// edge-disjoint, endpoints lie in the right boundary sets, and the value
// matches the number of paths. level_j < 0 means the full top boundary.
// Throws InternalError on any violation.
void check_dual_certificate(const WedgeGraph& g, const WeightField& field,
                            const CrossingCount& count, long long level_j = -1);

}  // namespace wedge
