#include "wedge_fpp/dual_crossings.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/max_flow.hpp"

namespace wedge {

bool dual_edge_exists(const WedgeGraph& g, DualPoint u, DualPoint v) {
  if (u.x == v.x && std::llabs(u.y - v.y) == 1) {
    // Vertical dual edge crosses the horizontal wedge edge in row min+1.
    const long long y = std::min(u.y, v.y) + 1;
    return u.x >= 0 && u.x < g.n && y >= 0 &&
           y <= g.heights[static_cast<std::size_t>(u.x)];
  }
  if (u.y == v.y && std::llabs(u.x - v.x) == 1) {
    // Horizontal dual edge crosses the vertical wedge edge in column min+1.
    const long long x = std::min(u.x, v.x) + 1;
    return x >= 0 && x <= g.n && u.y >= 0 &&
           u.y < g.heights[static_cast<std::size_t>(x)];
  }
  return false;
}

long long dual_edge_primal_id(const WedgeGraph& g, DualPoint u, DualPoint v) {
  if (!dual_edge_exists(g, u, v))
    throw ValidationError("dual_edge_primal_id: points not dual-adjacent here");
  if (u.x == v.x) return g.horizontal_edge_id(u.x, std::min(u.y, v.y) + 1);
  return g.vertical_edge_id(std::min(u.x, v.x) + 1, u.y);
}

namespace {

// Dense ids for dual points (x,y) with x in [-1,n], y in [-1,top_height],
// plus a super source and super sink.
struct DualIndex {
  long long span;  // top_height + 2
  long long source, sink;

  explicit DualIndex(const WedgeGraph& g) {
    span = g.top_height + 2;
    const long long base = (g.n + 2) * span;
    source = base;
    sink = base + 1;
  }
  long long id(DualPoint p) const { return (p.x + 1) * span + (p.y + 1); }
  DualPoint point(long long v) const { return {v / span - 1, v % span - 1}; }
};

CrossingCount run_dual_flow(const WedgeGraph& g, const WeightField& field,
                            const std::vector<DualPoint>& sources,
                            CrossingKind kind) {
  const DualIndex ix(g);
  FlowNetwork net(ix.sink + 1);
  const long long big = g.edge_count + 1;

  for (long long e = 0; e < g.edge_count; ++e) {
    if (!field.closed(e)) continue;
    const WedgeGraph::EdgeRef r = g.edge_ref(e);
    DualPoint u, v;
    if (r.horizontal) {
      u = {r.x, r.y - 1};
      v = {r.x, r.y};
    } else {
      u = {r.x - 1, r.y};
      v = {r.x, r.y};
    }
    net.add_arc(ix.id(u), ix.id(v), 1);
    net.add_arc(ix.id(v), ix.id(u), 1);
  }
  for (const DualPoint& p : sources) net.add_arc(ix.source, ix.id(p), big);
  for (const DualPoint& p : g.bottom_boundary)
    net.add_arc(ix.id(p), ix.sink, big);

  CrossingCount out;
  out.kind = kind;
  out.value = net.max_flow(ix.source, ix.sink);
  for (const FlowPath& fp : decompose_unit_paths(net, ix.source, ix.sink)) {
    DualPath path;
    for (std::size_t i = 1; i + 1 < fp.size(); ++i)
      path.push_back(ix.point(fp[i]));
    out.certificate.push_back(std::move(path));
  }
  return out;
}

}  // namespace

CrossingCount dual_separating_count(const WedgeGraph& g,
                                    const WeightField& field) {
  std::vector<DualPoint> sources;
  for (const auto& lvl : g.top_boundary)
    sources.insert(sources.end(), lvl.begin(), lvl.end());
  return run_dual_flow(g, field, sources, CrossingKind::DualTopDown);
}

CrossingCount dual_level_count(const WedgeGraph& g, const WeightField& field,
                               long long j) {
  if (j < 0) throw ValidationError("dual_level_count: negative level");
  if (j >= static_cast<long long>(g.top_boundary.size())) {
    CrossingCount out;
    out.kind = CrossingKind::DualFromLevel;
    return out;
  }
  return run_dual_flow(g, field, g.top_boundary[static_cast<std::size_t>(j)],
                       CrossingKind::DualFromLevel);
}

void check_dual_certificate(const WedgeGraph& g, const WeightField& field,
                            const CrossingCount& count, long long level_j) {
  if (count.value != static_cast<long long>(count.certificate.size()))
    throw InternalError("dual certificate: value differs from path count");

  std::set<DualPoint> tops;
  if (level_j < 0) {
    for (const auto& lvl : g.top_boundary) tops.insert(lvl.begin(), lvl.end());
  } else if (level_j < static_cast<long long>(g.top_boundary.size())) {
    const auto& lvl = g.top_boundary[static_cast<std::size_t>(level_j)];
    tops.insert(lvl.begin(), lvl.end());
  }
  std::set<DualPoint> bottoms(g.bottom_boundary.begin(),
                              g.bottom_boundary.end());

  std::set<long long> used;
  for (const DualPath& path : count.certificate) {
    if (path.size() < 2)
      throw InternalError("dual certificate: path too short");
    if (tops.count(path.front()) == 0)
      throw InternalError("dual certificate: path does not start on top set");
    if (bottoms.count(path.back()) == 0)
      throw InternalError("dual certificate: path does not end on bottom set");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!dual_edge_exists(g, path[i], path[i + 1]))
        throw InternalError("dual certificate: step is not a dual edge");
      const long long e = dual_edge_primal_id(g, path[i], path[i + 1]);
      if (!field.closed(e))
        throw InternalError("dual certificate: crossed edge is open");
      if (!used.insert(e).second)
        throw InternalError("dual certificate: edge reused across paths");
    }
  }
}

}  // namespace wedge
