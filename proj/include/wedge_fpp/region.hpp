#pragma once

#include <functional>
#include <vector>

#include "wedge_fpp/wedge_graph.hpp"
#include "wedge_fpp/weights.hpp"

namespace wedge {

// Column range [x_lo, x_hi] of a wedge graph with all vertices and induced
// edges. The top set is the highest vertex of each column; the bottom is the
// row y = 0.
struct BlockRegion {
  const WedgeGraph* g = nullptr;
  long long x_lo = 0;
  long long x_hi = 0;
};

BlockRegion make_region(const WedgeGraph& g, long long x_lo, long long x_hi);

// Edge predicate by edge id: true when the edge is open (t = 0).
using OpenFn = std::function<bool(long long)>;
OpenFn open_from_field(const WeightField& field);

bool in_region(const BlockRegion& r, long long x, long long y);

// True iff an open path inside the region joins the top set to the bottom
// row. A height-zero column makes this trivially true (its single vertex is
// both top and bottom).
bool top_down_crossing_exists(const BlockRegion& r, const OpenFn& open);

// The open top-down crossing whose enclosed area to its west is minimal,
// returned as graph vertex ids, top vertex first, bottom vertex last.
// Normal form: one top-set vertex (the first), one bottom vertex (the last),
// self-avoiding, every edge open. Computed by wall-following the west
// interface of each top vertex's open cluster, scanning start columns west
// to east; the tests certify it against exhaustive enumeration.
// Throws ValidationError when no crossing exists.
std::vector<long long> leftmost_crossing(const BlockRegion& r,
                                         const OpenFn& open);

// Number of unit faces of the region cut off to the west of the crossing:
// faces not reachable from the open east side once the crossing's edges are
// treated as walls. The crossing must be a valid top-down path in the region.
long long interior_area(const BlockRegion& r,
                        const std::vector<long long>& crossing);

}  // namespace wedge
