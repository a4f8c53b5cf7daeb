#include "wedge_fpp/region.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "wedge_fpp/errors.hpp"

namespace wedge {

BlockRegion make_region(const WedgeGraph& g, long long x_lo, long long x_hi) {
  if (x_lo < 0 || x_hi > g.n || x_lo > x_hi)
    throw ValidationError("make_region: column range outside the graph");
  return BlockRegion{&g, x_lo, x_hi};
}

OpenFn open_from_field(const WeightField& field) {
  const WeightField* f = &field;
  return [f](long long e) { return f->open(e); };
}

bool in_region(const BlockRegion& r, long long x, long long y) {
  return x >= r.x_lo && x <= r.x_hi && y >= 0 &&
         y <= r.g->heights[static_cast<std::size_t>(x)];
}

namespace {

long long height_at(const BlockRegion& r, long long x) {
  return r.g->heights[static_cast<std::size_t>(x)];
}

// Id of the graph edge between two adjacent region vertices. The wedge graph
// is induced, so the edge always exists when both endpoints do.
long long edge_between(const WedgeGraph& g, long long xv, long long yv,
                       long long xu, long long yu) {
  if (xv == xu) return g.vertical_edge_id(xv, std::min(yv, yu));
  return g.horizontal_edge_id(std::min(xv, xu), yv);
}

// Directions of travel: 0=N, 1=E, 2=S, 3=W.
constexpr long long kDX[4] = {0, 1, 0, -1};
constexpr long long kDY[4] = {1, 0, -1, 0};

// Deterministic west-hugging wall-follow from one top-set vertex. Returns
// the raw vertex trace on success (bottom row reached), empty on failure
// (the walk re-enters a previous state, so it cycles forever).
std::vector<long long> walk_from_start(const BlockRegion& r, const OpenFn& open,
                                       long long sx, long long sy) {
  const WedgeGraph& g = *r.g;
  const long long base = g.voff[static_cast<std::size_t>(r.x_lo)];
  const long long vcount = g.voff[static_cast<std::size_t>(r.x_hi)] +
                           height_at(r, r.x_hi) + 1 - base;
  std::vector<char> visited(static_cast<std::size_t>(4 * vcount), 0);

  std::vector<long long> trace;
  long long x = sx, y = sy;
  int dir = 2;  // virtual arrival heading south, so the first try is west
  trace.push_back(g.vertex_id(x, y));
  visited[static_cast<std::size_t>(4 * (g.vertex_id(x, y) - base) + dir)] = 1;

  const long long cap = 16 * vcount + 64;
  long long steps = 0;
  while (true) {
    if (++steps > cap)
      throw InternalError("leftmost_crossing: wall-follow exceeded its cap");
    bool moved = false;
    // Trial order right, straight, left, back keeps the west wall on hand.
    const int trials[4] = {(dir + 1) & 3, dir, (dir + 3) & 3, (dir + 2) & 3};
    for (int t = 0; t < 4; ++t) {
      const int d = trials[t];
      const long long nx = x + kDX[d], ny = y + kDY[d];
      if (!in_region(r, nx, ny)) continue;
      if (!open(edge_between(g, x, y, nx, ny))) continue;
      if (ny == 0) {  // bottom row: the crossing is complete
        trace.push_back(g.vertex_id(nx, ny));
        return trace;
      }
      // Top-set vertices other than the start are barred so the loop-erased
      // path keeps exactly one. Passing back through the start is fine: the
      // excursion disappears under loop erasure.
      if (ny == height_at(r, nx) && !(nx == sx && ny == sy)) continue;
      const long long state = 4 * (g.vertex_id(nx, ny) - base) + d;
      if (visited[static_cast<std::size_t>(state)]) return {};
      visited[static_cast<std::size_t>(state)] = 1;
      x = nx;
      y = ny;
      dir = d;
      trace.push_back(g.vertex_id(x, y));
      moved = true;
      break;
    }
    if (!moved) return {};  // start has no usable neighbor at all
  }
}

std::vector<long long> loop_erase(const std::vector<long long>& trace) {
  std::vector<long long> path;
  std::unordered_map<long long, std::size_t> pos;
  for (long long v : trace) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      while (path.size() > it->second + 1) {
        pos.erase(path.back());
        path.pop_back();
      }
    } else {
      path.push_back(v);
      pos.emplace(v, path.size() - 1);
    }
  }
  return path;
}

}  // namespace

bool top_down_crossing_exists(const BlockRegion& r, const OpenFn& open) {
  const WedgeGraph& g = *r.g;
  const long long base = g.voff[static_cast<std::size_t>(r.x_lo)];
  const long long vcount = g.voff[static_cast<std::size_t>(r.x_hi)] +
                           height_at(r, r.x_hi) + 1 - base;
  std::vector<char> seen(static_cast<std::size_t>(vcount), 0);
  std::queue<long long> q;
  for (long long x = r.x_lo; x <= r.x_hi; ++x) {
    const long long h = height_at(r, x);
    if (h == 0) return true;  // single vertex is both top and bottom
    const long long v = g.vertex_id(x, h);
    seen[static_cast<std::size_t>(v - base)] = 1;
    q.push(v);
  }
  while (!q.empty()) {
    const long long v = q.front();
    q.pop();
    for (long long idx = g.adj_off[static_cast<std::size_t>(v)];
         idx < g.adj_off[static_cast<std::size_t>(v) + 1]; ++idx) {
      const long long u = g.adj_to[static_cast<std::size_t>(idx)];
      if (u < base || u >= base + vcount) continue;
      if (seen[static_cast<std::size_t>(u - base)]) continue;
      if (!open(g.adj_edge[static_cast<std::size_t>(idx)])) continue;
      const long long col = g.column_of[static_cast<std::size_t>(u)];
      if (u == g.voff[static_cast<std::size_t>(col)]) return true;  // y == 0
      seen[static_cast<std::size_t>(u - base)] = 1;
      q.push(u);
    }
  }
  return false;
}

std::vector<long long> leftmost_crossing(const BlockRegion& r,
                                         const OpenFn& open) {
  const WedgeGraph& g = *r.g;
  for (long long x = r.x_lo; x <= r.x_hi; ++x) {
    const long long h = height_at(r, x);
    if (h == 0) return {g.vertex_id(x, 0)};
    const std::vector<long long> trace = walk_from_start(r, open, x, h);
    if (!trace.empty()) return loop_erase(trace);
  }
  throw ValidationError("leftmost_crossing: no top-down open crossing");
}

long long interior_area(const BlockRegion& r,
                        const std::vector<long long>& crossing) {
  const WedgeGraph& g = *r.g;
  if (crossing.empty())
    throw ValidationError("interior_area: empty crossing");
  {
    const auto [fx, fy] = g.vertex_xy(crossing.front());
    if (!in_region(r, fx, fy) || fy != height_at(r, fx))
      throw ValidationError("interior_area: crossing must start on the top set");
    const auto [lx, ly] = g.vertex_xy(crossing.back());
    if (!in_region(r, lx, ly) || ly != 0)
      throw ValidationError("interior_area: crossing must end on the bottom row");
    for (std::size_t i = 0; i + 1 < crossing.size(); ++i) {
      const auto [ax, ay] = g.vertex_xy(crossing[i]);
      const auto [bx, by] = g.vertex_xy(crossing[i + 1]);
      if (!in_region(r, bx, by) ||
          std::abs(ax - bx) + std::abs(ay - by) != 1)
        throw ValidationError("interior_area: crossing steps must be adjacent");
    }
  }
  if (r.x_lo == r.x_hi) return 0;  // a single column has no faces

  // Faces (x, m), x in [x_lo, x_hi-1], m in [0, h_x): heights nondecreasing,
  // so h_x is the number of faces in slot x.
  const long long slots = r.x_hi - r.x_lo;
  std::vector<long long> foff(static_cast<std::size_t>(slots) + 1, 0);
  for (long long s = 0; s < slots; ++s)
    foff[static_cast<std::size_t>(s) + 1] =
        foff[static_cast<std::size_t>(s)] + height_at(r, r.x_lo + s);
  const long long faces = foff[static_cast<std::size_t>(slots)];
  if (faces == 0) return 0;

  std::unordered_set<long long> walls;
  for (std::size_t i = 0; i + 1 < crossing.size(); ++i) {
    const auto [xv, yv] = g.vertex_xy(crossing[i]);
    const auto [xu, yu] = g.vertex_xy(crossing[i + 1]);
    walls.insert(edge_between(g, xv, yv, xu, yu));
  }
  const auto blocked = [&](long long e) { return walls.count(e) != 0; };

  std::vector<char> reached(static_cast<std::size_t>(faces), 0);
  std::queue<long long> q;
  const auto face_id = [&](long long x, long long m) {
    return foff[static_cast<std::size_t>(x - r.x_lo)] + m;
  };
  const auto visit = [&](long long x, long long m) {
    const long long id = face_id(x, m);
    if (!reached[static_cast<std::size_t>(id)]) {
      reached[static_cast<std::size_t>(id)] = 1;
      q.push(id);
    }
  };

  // Flood the exterior from open water east of the region: entering face
  // (x_hi-1, m) crosses the vertical edge in the region's east column.
  for (long long m = 0; m < height_at(r, r.x_hi - 1); ++m)
    if (!blocked(g.vertical_edge_id(r.x_hi, m))) visit(r.x_hi - 1, m);

  while (!q.empty()) {
    const long long id = q.front();
    q.pop();
    const long long slot =
        static_cast<long long>(std::upper_bound(foff.begin(), foff.end(), id) -
                               foff.begin()) -
        1;
    const long long x = r.x_lo + slot;
    const long long m = id - foff[static_cast<std::size_t>(slot)];
    if (x - 1 >= r.x_lo && m < height_at(r, x - 1) &&
        !blocked(g.vertical_edge_id(x, m)))
      visit(x - 1, m);
    if (x + 1 <= r.x_hi - 1 && !blocked(g.vertical_edge_id(x + 1, m)))
      visit(x + 1, m);
    if (m + 1 < height_at(r, x) && !blocked(g.horizontal_edge_id(x, m + 1)))
      visit(x, m + 1);
    if (m - 1 >= 0 && !blocked(g.horizontal_edge_id(x, m)))
      visit(x, m - 1);
  }

  long long out = 0;
  for (char c : reached)
    if (!c) ++out;
  return out;
}

}  // namespace wedge
