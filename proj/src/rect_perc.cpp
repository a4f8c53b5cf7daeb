#include "wedge_fpp/rect_perc.hpp"

#include <algorithm>
#include <set>

#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/max_flow.hpp"

namespace wedge {

void ClusterScratch::ensure(long long vertex_count) {
  if (static_cast<long long>(seen.size()) < vertex_count)
    seen.assign(static_cast<std::size_t>(vertex_count), 0);
  stack.clear();
  touched.clear();
}

void ClusterScratch::undo() {
  for (long long v : touched) seen[static_cast<std::size_t>(v)] = 0;
  touched.clear();
  stack.clear();
}

namespace {

// Visits the open cluster of `starts`; returns true as soon as `stop`
// returns true for a reached vertex (scratch cleaned either way).
template <typename Visit, typename Stop>
bool explore(const PercConfig& c, const std::vector<long long>& starts,
             ClusterScratch& s, Visit&& visit, Stop&& stop) {
  s.ensure(rect_vertex_count(c));
  bool hit = false;
  for (long long v : starts) {
    if (s.seen[static_cast<std::size_t>(v)]) continue;
    s.seen[static_cast<std::size_t>(v)] = 1;
    s.touched.push_back(v);
    s.stack.push_back(v);
    visit(v);
    if (stop(v)) {
      hit = true;
      break;
    }
  }
  const long long row = c.w + 1;
  while (!hit && !s.stack.empty()) {
    const long long v = s.stack.back();
    s.stack.pop_back();
    const long long x = v % row, y = v / row;
    long long nbr[4], edge[4];
    int cnt = 0;
    if (x < c.w) { nbr[cnt] = v + 1; edge[cnt++] = c.hedge(x, y); }
    if (x > 0) { nbr[cnt] = v - 1; edge[cnt++] = c.hedge(x - 1, y); }
    if (y < c.h) { nbr[cnt] = v + row; edge[cnt++] = c.vedge(x, y); }
    if (y > 0) { nbr[cnt] = v - row; edge[cnt++] = c.vedge(x, y - 1); }
    for (int i = 0; i < cnt && !hit; ++i) {
      const long long u = nbr[i];
      if (s.seen[static_cast<std::size_t>(u)]) continue;
      if (!c.open(edge[i])) continue;
      s.seen[static_cast<std::size_t>(u)] = 1;
      s.touched.push_back(u);
      s.stack.push_back(u);
      visit(u);
      if (stop(u)) hit = true;
    }
  }
  s.undo();
  return hit;
}

}  // namespace

void open_cluster(const PercConfig& c, const std::vector<long long>& starts,
                  ClusterScratch& scratch, std::vector<long long>& out) {
  explore(
      c, starts, scratch, [&](long long v) { out.push_back(v); },
      [](long long) { return false; });
}

bool has_left_right_crossing(const PercConfig& c, ClusterScratch& scratch) {
  std::vector<long long> left;
  left.reserve(static_cast<std::size_t>(c.h) + 1);
  for (long long y = 0; y <= c.h; ++y) left.push_back(rect_vertex(c, 0, y));
  const long long row = c.w + 1;
  return explore(
      c, left, scratch, [](long long) {},
      [&](long long v) { return v % row == c.w; });
}

CrossingCount open_crossing_count(const PercConfig& c,
                                  const std::vector<long long>& sources,
                                  const std::vector<long long>& sinks,
                                  CrossingKind kind) {
  const long long vcount = rect_vertex_count(c);
  {
    std::set<long long> src(sources.begin(), sources.end());
    for (long long v : sinks)
      if (src.count(v))
        throw ValidationError("open_crossing_count: source and sink overlap");
  }
  FlowNetwork net(vcount + 2);
  const long long S = vcount, T = vcount + 1;
  const long long big = c.edge_count() + 1;

  // Open edges become unit-capacity arcs both ways.
  for (long long y = 0; y <= c.h; ++y)
    for (long long x = 0; x < c.w; ++x)
      if (c.open(c.hedge(x, y))) {
        net.add_arc(rect_vertex(c, x, y), rect_vertex(c, x + 1, y), 1);
        net.add_arc(rect_vertex(c, x + 1, y), rect_vertex(c, x, y), 1);
      }
  for (long long y = 0; y < c.h; ++y)
    for (long long x = 0; x <= c.w; ++x)
      if (c.open(c.vedge(x, y))) {
        net.add_arc(rect_vertex(c, x, y), rect_vertex(c, x, y + 1), 1);
        net.add_arc(rect_vertex(c, x, y + 1), rect_vertex(c, x, y), 1);
      }
  for (long long v : sources) net.add_arc(S, v, big);
  for (long long v : sinks) net.add_arc(v, T, big);

  CrossingCount out;
  out.kind = kind;
  out.value = net.max_flow(S, T);
  for (const FlowPath& fp : decompose_unit_paths(net, S, T)) {
    DualPath path;
    for (std::size_t i = 1; i + 1 < fp.size(); ++i) {
      const long long v = fp[i];
      path.push_back(DualPoint{v % (c.w + 1), v / (c.w + 1)});
    }
    out.certificate.push_back(std::move(path));
  }
  return out;
}

CrossingCount open_left_right_count(const PercConfig& c) {
  std::vector<long long> left, right;
  for (long long y = 0; y <= c.h; ++y) {
    left.push_back(rect_vertex(c, 0, y));
    right.push_back(rect_vertex(c, c.w, y));
  }
  return open_crossing_count(c, left, right, CrossingKind::OpenLeftRight);
}

void check_open_certificate(const PercConfig& c,
                            const std::vector<long long>& sources,
                            const std::vector<long long>& sinks,
                            const CrossingCount& count) {
  if (count.value != static_cast<long long>(count.certificate.size()))
    throw InternalError("open certificate: value differs from path count");
  const std::set<long long> src(sources.begin(), sources.end());
  const std::set<long long> dst(sinks.begin(), sinks.end());
  std::set<long long> used;
  for (const DualPath& path : count.certificate) {
    if (path.empty()) throw InternalError("open certificate: empty path");
    const auto vid = [&](const DualPoint& p) {
      return rect_vertex(c, p.x, p.y);
    };
    if (src.count(vid(path.front())) == 0)
      throw InternalError("open certificate: path does not start on a source");
    if (dst.count(vid(path.back())) == 0)
      throw InternalError("open certificate: path does not end on a sink");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const DualPoint a = path[i], b = path[i + 1];
      const long long adx = std::llabs(a.x - b.x), ady = std::llabs(a.y - b.y);
      if (adx + ady != 1)
        throw InternalError("open certificate: step is not a lattice edge");
      long long e;
      if (ady == 0)
        e = c.hedge(std::min(a.x, b.x), a.y);
      else
        e = c.vedge(a.x, std::min(a.y, b.y));
      if (!c.open(e))
        throw InternalError("open certificate: crossed edge is not open");
      if (!used.insert(e).second)
        throw InternalError("open certificate: edge reused across paths");
    }
  }
}

}  // namespace wedge
