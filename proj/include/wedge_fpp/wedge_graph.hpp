#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wedge_fpp/wedge_function.hpp"

namespace wedge {

// Integer encoding of the dual-lattice point (x + 1/2, y + 1/2).
struct DualPoint {
  long long x = 0;
  long long y = 0;
  friend bool operator==(const DualPoint& p, const DualPoint& q) {
    return p.x == q.x && p.y == q.y;
  }
  friend bool operator!=(const DualPoint& p, const DualPoint& q) {
    return !(p == q);
  }
  friend bool operator<(const DualPoint& p, const DualPoint& q) {
    return p.x != q.x ? p.x < q.x : p.y < q.y;
  }
};

// Finite wedge graph on columns 0..n. Column k carries vertices (k, 0..h_k)
// with h_k = floor(f(k)); heights are nondecreasing, so every horizontal edge
// at height y <= h_k exists precisely when y <= h_k (the lower of the pair).
//
// Vertex ids are column-major: id = voff[k] + y.
// Edge ids are bundled per column: first the h_k vertical edges of column k,
// then, for k < n, the h_k + 1 horizontal edges from column k to k+1.
struct WedgeGraph {
  long long n = 0;
  WedgeFunction f;
  std::vector<long long> heights;  // size n+1
  long long top_height = 0;        // heights[n]
  std::vector<long long> ell;      // ell[j], j = 0..top_height

  std::vector<long long> voff;  // size n+2
  std::vector<long long> eoff;  // size n+2
  long long vertex_count = 0;
  long long edge_count = 0;
  std::vector<long long> column_of;  // per vertex

  std::vector<std::pair<long long, long long>> highest_path;

  // H*(n; j): dual points just outside the highest path, grouped by level.
  std::vector<std::vector<DualPoint>> top_boundary;  // size top_height+1
  // L*(n): dual points (x, -1), x = 0..n-1.
  std::vector<DualPoint> bottom_boundary;

  // CSR adjacency: for vertex v, entries adj_off[v]..adj_off[v+1).
  std::vector<long long> adj_off;
  std::vector<long long> adj_edge;
  std::vector<long long> adj_to;

  bool has_vertex(long long x, long long y) const {
    return x >= 0 && x <= n && y >= 0 && y <= heights[static_cast<std::size_t>(x)];
  }
  long long vertex_id(long long x, long long y) const {
    return voff[static_cast<std::size_t>(x)] + y;
  }
  std::pair<long long, long long> vertex_xy(long long v) const {
    const long long x = column_of[static_cast<std::size_t>(v)];
    return {x, v - voff[static_cast<std::size_t>(x)]};
  }

  bool has_vertical_edge(long long x, long long y) const {
    return x >= 0 && x <= n && y >= 0 &&
           y < heights[static_cast<std::size_t>(x)];
  }
  bool has_horizontal_edge(long long x, long long y) const {
    return x >= 0 && x < n && y >= 0 &&
           y <= heights[static_cast<std::size_t>(x)];
  }
  long long vertical_edge_id(long long x, long long y) const {
    return eoff[static_cast<std::size_t>(x)] + y;
  }
  long long horizontal_edge_id(long long x, long long y) const {
    return eoff[static_cast<std::size_t>(x)] + heights[static_cast<std::size_t>(x)] + y;
  }

  struct EdgeRef {
    long long x = 0;
    long long y = 0;
    bool horizontal = false;
  };
  EdgeRef edge_ref(long long e) const;
  // Endpoint vertex ids, lower left first.
  std::pair<long long, long long> edge_endpoints(long long e) const;
};

WedgeGraph build_graph(const WedgeFunction& f, long long n,
                       long long max_vertices = (1ll << 26));

// Cardinality of H*(n; j) by the level-gap formula:
//   max{ell_{j+1} - ell_j, 1} below the top level, n - ell_J at the top level,
//   zero above. Must agree with the geometric sets on the graph.
long long count_top_boundary(const WedgeGraph& g, long long j);

}  // namespace wedge
