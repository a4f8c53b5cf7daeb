#include "wedge_fpp/shortest_path.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>

#include "wedge_fpp/errors.hpp"

namespace wedge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<long long> endpoint_vertices(const WedgeGraph& g,
                                         const PassageTimeQuery::Endpoint& ep) {
  std::vector<long long> out;
  switch (ep.kind) {
    case PassageTimeQuery::Kind::Vertex:
      if (!g.has_vertex(ep.x, ep.y))
        throw ValidationError("passage_time: endpoint vertex outside the wedge");
      out.push_back(g.vertex_id(ep.x, ep.y));
      break;
    case PassageTimeQuery::Kind::Line: {
      if (ep.x < 0 || ep.x > g.n)
        throw ValidationError("passage_time: line outside the wedge");
      const long long h = g.heights[static_cast<std::size_t>(ep.x)];
      for (long long y = 0; y <= h; ++y) out.push_back(g.vertex_id(ep.x, y));
      break;
    }
    case PassageTimeQuery::Kind::Crossing:
      if (ep.vertices.empty())
        throw ValidationError("passage_time: empty crossing endpoint");
      for (long long v : ep.vertices) {
        if (v < 0 || v >= g.vertex_count)
          throw ValidationError("passage_time: crossing vertex id out of range");
        out.push_back(v);
      }
      break;
  }
  return out;
}

struct Sweep {
  std::vector<double> dist;
  std::vector<long long> parent;  // set on strict improvement, -1 at sources
  long long lo, hi;               // column window
};

Sweep run_sweep(const WedgeGraph& g, const WeightField& field,
                const PassageTimeQuery& query) {
  Sweep s;
  s.lo = query.window_lo;
  s.hi = query.window_hi < 0 ? g.n : query.window_hi;
  if (s.lo < 0 || s.hi > g.n || s.lo > s.hi)
    throw ValidationError("passage_time: bad column window");

  s.dist.assign(static_cast<std::size_t>(g.vertex_count), kInf);
  s.parent.assign(static_cast<std::size_t>(g.vertex_count), -1);
  const auto in_window = [&](long long v) {
    const long long c = g.column_of[static_cast<std::size_t>(v)];
    return c >= s.lo && c <= s.hi;
  };

  const std::vector<long long> sources = endpoint_vertices(g, query.source);
  for (long long v : sources) {
    if (!in_window(v))
      throw ValidationError("passage_time: source outside the column window");
    s.dist[static_cast<std::size_t>(v)] = 0.0;
  }

  if (query.mode == PassageTimeQuery::Mode::Bernoulli) {
    // 0-1 BFS over the t weights.
    std::deque<long long> dq(sources.begin(), sources.end());
    while (!dq.empty()) {
      const long long u = dq.front();
      dq.pop_front();
      const double du = s.dist[static_cast<std::size_t>(u)];
      for (long long idx = g.adj_off[static_cast<std::size_t>(u)];
           idx < g.adj_off[static_cast<std::size_t>(u) + 1]; ++idx) {
        const long long v = g.adj_to[static_cast<std::size_t>(idx)];
        if (!in_window(v)) continue;
        const long long e = g.adj_edge[static_cast<std::size_t>(idx)];
        const double w = static_cast<double>(field.t(e));
        if (du + w < s.dist[static_cast<std::size_t>(v)]) {
          s.dist[static_cast<std::size_t>(v)] = du + w;
          s.parent[static_cast<std::size_t>(v)] = u;
          if (w == 0.0)
            dq.push_front(v);
          else
            dq.push_back(v);
        }
      }
    }
  } else {
    using Item = std::pair<double, long long>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (long long v : sources) pq.emplace(0.0, v);
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (du > s.dist[static_cast<std::size_t>(u)]) continue;
      for (long long idx = g.adj_off[static_cast<std::size_t>(u)];
           idx < g.adj_off[static_cast<std::size_t>(u) + 1]; ++idx) {
        const long long v = g.adj_to[static_cast<std::size_t>(idx)];
        if (!in_window(v)) continue;
        const long long e = g.adj_edge[static_cast<std::size_t>(idx)];
        const double cand = du + field.tau(e);
        if (cand < s.dist[static_cast<std::size_t>(v)]) {
          s.dist[static_cast<std::size_t>(v)] = cand;
          s.parent[static_cast<std::size_t>(v)] = u;
          pq.emplace(cand, v);
        }
      }
    }
  }
  return s;
}

}  // namespace

std::vector<double> source_distances(const WedgeGraph& g,
                                     const WeightField& field,
                                     const PassageTimeQuery& query) {
  return run_sweep(g, field, query).dist;
}

PassageTimeResult passage_time(const WedgeGraph& g, const WeightField& field,
                               const PassageTimeQuery& query) {
  const Sweep s = run_sweep(g, field, query);

  const std::vector<long long> targets = endpoint_vertices(g, query.target);
  PassageTimeResult res;
  res.value = kInf;
  bool any_in_window = false;
  for (long long v : targets) {
    const long long c = g.column_of[static_cast<std::size_t>(v)];
    if (c < s.lo || c > s.hi) continue;
    any_in_window = true;
    const double d = s.dist[static_cast<std::size_t>(v)];
    // Ties broken toward the smallest vertex id, deterministically.
    if (d < res.value || (d == res.value && v < res.target_vertex)) {
      res.value = d;
      res.target_vertex = v;
    }
  }
  if (!any_in_window)
    throw ValidationError("passage_time: target outside the column window");
  if (res.value == kInf)
    throw InternalError("passage_time: target unreachable inside the window");

  // Walk the recorded parents. Parents are set only on strict distance
  // improvements, so the pointer forest is acyclic and roots at the sources.
  const std::vector<long long> source_set = endpoint_vertices(g, query.source);
  std::vector<char> is_source(static_cast<std::size_t>(g.vertex_count), 0);
  for (long long v : source_set) is_source[static_cast<std::size_t>(v)] = 1;

  std::vector<long long> rev;
  long long cur = res.target_vertex;
  rev.push_back(cur);
  long long guard = 0;
  while (!is_source[static_cast<std::size_t>(cur)]) {
    if (++guard > g.vertex_count)
      throw InternalError("passage_time: predecessor chain does not close");
    const long long prev = s.parent[static_cast<std::size_t>(cur)];
    if (prev < 0)
      throw InternalError("passage_time: reachable vertex without a parent");
    cur = prev;
    rev.push_back(cur);
  }
  res.path.assign(rev.rbegin(), rev.rend());
  return res;
}

}  // namespace wedge
