#include "wedge_fpp/wedge_graph.hpp"

#include <algorithm>
#include <cmath>

#include "wedge_fpp/errors.hpp"

namespace wedge {

WedgeGraph::EdgeRef WedgeGraph::edge_ref(long long e) const {
  if (e < 0 || e >= edge_count) throw InternalError("edge_ref: id out of range");
  const auto it = std::upper_bound(eoff.begin(), eoff.end(), e);
  const long long k = (it - eoff.begin()) - 1;
  const long long off = e - eoff[static_cast<std::size_t>(k)];
  const long long h = heights[static_cast<std::size_t>(k)];
  EdgeRef ref;
  ref.x = k;
  if (off < h) {
    ref.y = off;
    ref.horizontal = false;
  } else {
    ref.y = off - h;
    ref.horizontal = true;
  }
  return ref;
}

std::pair<long long, long long> WedgeGraph::edge_endpoints(long long e) const {
  const EdgeRef r = edge_ref(e);
  if (r.horizontal)
    return {vertex_id(r.x, r.y), vertex_id(r.x + 1, r.y)};
  return {vertex_id(r.x, r.y), vertex_id(r.x, r.y + 1)};
}

WedgeGraph build_graph(const WedgeFunction& f, long long n,
                       long long max_vertices) {
  if (n < 1) throw ValidationError("build_graph: n must be >= 1");
  if (f.kind == WedgeKind::Custom &&
      n >= static_cast<long long>(f.table.size()))
    throw ValidationError("build_graph: custom table must cover 0..n");
  // Cheap early cap: one vertex per column at minimum, tested before any
  // allocation sized by n can blow up.
  if (n + 1 > max_vertices)
    throw ResourceError("build_graph: vertex count exceeds the memory cap");

  WedgeGraph g;
  g.n = n;
  g.f = f;

  // Levels first: ell_j = min{d : f(d) >= j} for j up to floor(f(n)). The
  // cap and the bisection inside level() use the same eval_f comparison, so
  // ell_j <= n holds for exactly these j. Heights are then read off the
  // level walk, which keeps floors, levels, and the path consistent at
  // floating-point boundaries.
  const long long j_cap =
      static_cast<long long>(std::floor(eval_f(f, static_cast<double>(n))));
  g.ell.push_back(0);
  for (long long j = 1; j <= j_cap; ++j) {
    const LevelIndex li = level(f, j);
    if (li.ell > n) break;
    g.ell.push_back(li.ell);
  }
  const long long J = static_cast<long long>(g.ell.size()) - 1;
  g.top_height = J;

  g.heights.assign(static_cast<std::size_t>(n) + 1, 0);
  for (long long j = 1; j <= J; ++j) {
    const long long lo = g.ell[static_cast<std::size_t>(j)];
    const long long hi = (j < J) ? g.ell[static_cast<std::size_t>(j) + 1] : n + 1;
    for (long long k = lo; k < hi; ++k)
      g.heights[static_cast<std::size_t>(k)] = j;
  }

  // Offsets and counts.
  g.voff.assign(static_cast<std::size_t>(n) + 2, 0);
  g.eoff.assign(static_cast<std::size_t>(n) + 2, 0);
  for (long long k = 0; k <= n; ++k) {
    const long long h = g.heights[static_cast<std::size_t>(k)];
    g.voff[static_cast<std::size_t>(k) + 1] =
        g.voff[static_cast<std::size_t>(k)] + h + 1;
    const long long bundle = h + (k < n ? h + 1 : 0);
    g.eoff[static_cast<std::size_t>(k) + 1] =
        g.eoff[static_cast<std::size_t>(k)] + bundle;
  }
  g.vertex_count = g.voff[static_cast<std::size_t>(n) + 1];
  g.edge_count = g.eoff[static_cast<std::size_t>(n) + 1];
  if (g.vertex_count > max_vertices)
    throw ResourceError("build_graph: vertex count exceeds the memory cap");

  g.column_of.resize(static_cast<std::size_t>(g.vertex_count));
  for (long long k = 0; k <= n; ++k)
    for (long long v = g.voff[static_cast<std::size_t>(k)];
         v < g.voff[static_cast<std::size_t>(k) + 1]; ++v)
      g.column_of[static_cast<std::size_t>(v)] = k;

  // Highest path: rights along each level, one up step at each ell_{j+1}.
  g.highest_path.emplace_back(0, 0);
  long long x = 0;
  for (long long j = 0; j < J; ++j) {
    const long long next = g.ell[static_cast<std::size_t>(j) + 1];
    for (; x < next; ) {
      ++x;
      g.highest_path.emplace_back(x, j);
    }
    g.highest_path.emplace_back(x, j + 1);
  }
  for (; x < n; ) {
    ++x;
    g.highest_path.emplace_back(x, J);
  }

  // H* from the path edges: a horizontal edge ((k,j),(k+1,j)) is crossed by
  // the dual vertical edge whose upper endpoint is (k, j); a vertical edge
  // ((l,j),(l,j+1)) is crossed by the dual horizontal edge whose western
  // endpoint is (l-1, j). Deduplicate adjacent repeats.
  g.top_boundary.assign(static_cast<std::size_t>(J) + 1, {});
  for (std::size_t i = 1; i < g.highest_path.size(); ++i) {
    const auto& prev = g.highest_path[i - 1];
    const auto& curr = g.highest_path[i];
    DualPoint p;
    if (prev.second == curr.second) {
      p = DualPoint{prev.first, prev.second};
    } else {
      p = DualPoint{curr.first - 1, prev.second};
    }
    auto& lvl = g.top_boundary[static_cast<std::size_t>(p.y)];
    if (lvl.empty() || !(lvl.back() == p)) lvl.push_back(p);
  }

  g.bottom_boundary.reserve(static_cast<std::size_t>(n));
  for (long long k = 0; k < n; ++k)
    g.bottom_boundary.push_back(DualPoint{k, -1});

  // CSR adjacency from the edge bundles.
  std::vector<long long> degree(static_cast<std::size_t>(g.vertex_count), 0);
  for (long long e = 0; e < g.edge_count; ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }
  g.adj_off.assign(static_cast<std::size_t>(g.vertex_count) + 1, 0);
  for (long long v = 0; v < g.vertex_count; ++v)
    g.adj_off[static_cast<std::size_t>(v) + 1] =
        g.adj_off[static_cast<std::size_t>(v)] + degree[static_cast<std::size_t>(v)];
  g.adj_edge.resize(static_cast<std::size_t>(2 * g.edge_count));
  g.adj_to.resize(static_cast<std::size_t>(2 * g.edge_count));
  std::vector<long long> cursor(g.adj_off.begin(), g.adj_off.end() - 1);
  for (long long e = 0; e < g.edge_count; ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    g.adj_edge[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)])] = e;
    g.adj_to[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)]++)] = v;
    g.adj_edge[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)])] = e;
    g.adj_to[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = u;
  }

  return g;
}

long long count_top_boundary(const WedgeGraph& g, long long j) {
  if (j < 0) throw ValidationError("count_top_boundary: j must be >= 0");
  const long long J = g.top_height;
  if (j > J) return 0;
  if (j == J) return g.n - g.ell[static_cast<std::size_t>(J)];
  const long long gap = g.ell[static_cast<std::size_t>(j) + 1] -
                        g.ell[static_cast<std::size_t>(j)];
  return std::max<long long>(gap, 1);
}

}  // namespace wedge
