#include "wedge_fpp/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>

#include "wedge_fpp/errors.hpp"

namespace wedge {

FlowNetwork::FlowNetwork(long long node_count) {
  if (node_count <= 0)
    throw ValidationError("FlowNetwork: node count must be positive");
  head_.assign(static_cast<std::size_t>(node_count), -1);
}

long long FlowNetwork::add_arc(long long from, long long to, long long capacity) {
  if (from < 0 || from >= node_count() || to < 0 || to >= node_count())
    throw ValidationError("FlowNetwork: arc endpoint out of range");
  if (capacity < 0) throw ValidationError("FlowNetwork: negative capacity");
  const long long idx = arc_count();
  auto push = [&](long long f, long long t, long long c) {
    from_.push_back(f);
    to_.push_back(t);
    cap_.push_back(c);
    orig_cap_.push_back(c);
    next_.push_back(head_[static_cast<std::size_t>(f)]);
    head_[static_cast<std::size_t>(f)] = arc_count() - 1;
  };
  push(from, to, capacity);
  push(to, from, 0);
  return idx;
}

long long FlowNetwork::arc_flow(long long a) const {
  return orig_cap_[static_cast<std::size_t>(a)] - cap_[static_cast<std::size_t>(a)];
}

bool FlowNetwork::bfs_levels(long long s, long long t) {
  level_.assign(head_.size(), -1);
  std::queue<long long> q;
  q.push(s);
  level_[static_cast<std::size_t>(s)] = 0;
  while (!q.empty()) {
    const long long v = q.front();
    q.pop();
    for (long long a = head_[static_cast<std::size_t>(v)]; a != -1;
         a = next_[static_cast<std::size_t>(a)]) {
      const long long w = to_[static_cast<std::size_t>(a)];
      if (cap_[static_cast<std::size_t>(a)] > 0 &&
          level_[static_cast<std::size_t>(w)] < 0) {
        level_[static_cast<std::size_t>(w)] = level_[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
    }
  }
  return level_[static_cast<std::size_t>(t)] >= 0;
}

long long FlowNetwork::dfs_push(long long v, long long t, long long limit) {
  if (v == t) return limit;
  for (long long& a = iter_[static_cast<std::size_t>(v)]; a != -1;
       a = next_[static_cast<std::size_t>(a)]) {
    const long long w = to_[static_cast<std::size_t>(a)];
    if (cap_[static_cast<std::size_t>(a)] > 0 &&
        level_[static_cast<std::size_t>(w)] ==
            level_[static_cast<std::size_t>(v)] + 1) {
      const long long pushed =
          dfs_push(w, t, std::min(limit, cap_[static_cast<std::size_t>(a)]));
      if (pushed > 0) {
        cap_[static_cast<std::size_t>(a)] -= pushed;
        cap_[static_cast<std::size_t>(a ^ 1)] += pushed;
        return pushed;
      }
    }
  }
  return 0;
}

long long FlowNetwork::max_flow(long long s, long long t) {
  if (s == t) throw ValidationError("FlowNetwork: source equals sink");
  long long total = 0;
  while (bfs_levels(s, t)) {
    iter_ = head_;
    while (true) {
      const long long pushed =
          dfs_push(s, t, std::numeric_limits<long long>::max());
      if (pushed == 0) break;
      total += pushed;
    }
  }
  return total;
}

std::vector<char> FlowNetwork::residual_reachable(long long s) const {
  std::vector<char> seen(head_.size(), 0);
  std::queue<long long> q;
  q.push(s);
  seen[static_cast<std::size_t>(s)] = 1;
  while (!q.empty()) {
    const long long v = q.front();
    q.pop();
    for (long long a = head_[static_cast<std::size_t>(v)]; a != -1;
         a = next_[static_cast<std::size_t>(a)]) {
      const long long w = to_[static_cast<std::size_t>(a)];
      if (cap_[static_cast<std::size_t>(a)] > 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        q.push(w);
      }
    }
  }
  return seen;
}

std::vector<FlowPath> decompose_unit_paths(const FlowNetwork& net,
                                           long long s, long long t) {
  // Net flow per ordered node pair; antiparallel pushes cancel.
  std::map<std::pair<long long, long long>, long long> net_flow;
  for (long long a = 0; a < net.arc_count(); a += 2) {
    const long long f = net.arc_flow(a);
    if (f == 0) continue;
    const long long u = net.arc_from(a), v = net.arc_to(a);
    auto key = std::minmax(u, v);
    long long& slot = net_flow[{key.first, key.second}];
    slot += (u <= v) ? f : -f;  // positive means low-id -> high-id
  }

  // Successor multiset per node from the netted flow.
  std::map<long long, std::vector<long long>> succ;
  for (const auto& [key, f] : net_flow) {
    if (f == 0) continue;
    const long long u = f > 0 ? key.first : key.second;
    const long long v = f > 0 ? key.second : key.first;
    for (long long i = 0; i < std::llabs(f); ++i) succ[u].push_back(v);
  }
  for (auto& [u, vs] : succ) std::sort(vs.begin(), vs.end());

  long long total_units = 0;
  for (const auto& [u, vs] : succ) total_units += static_cast<long long>(vs.size());

  std::vector<FlowPath> paths;
  while (true) {
    auto it = succ.find(s);
    if (it == succ.end() || it->second.empty()) break;
    // Walk with loop-erasure: a revisited node truncates the loop, consuming
    // that cycle's units without emitting them.
    FlowPath p{s};
    std::map<long long, std::size_t> pos{{s, 0}};
    long long cur = s;
    long long guard = 0;
    while (cur != t) {
      if (++guard > total_units + 4)
        throw InternalError("decompose_unit_paths: walk does not reach sink");
      auto jt = succ.find(cur);
      if (jt == succ.end() || jt->second.empty())
        throw InternalError("decompose_unit_paths: flow conservation violated");
      cur = jt->second.back();
      jt->second.pop_back();
      auto seen = pos.find(cur);
      if (seen != pos.end()) {
        while (p.size() > seen->second + 1) {
          pos.erase(p.back());
          p.pop_back();
        }
      } else {
        p.push_back(cur);
        pos[cur] = p.size() - 1;
      }
    }
    paths.push_back(std::move(p));
  }
  // Leftover units, if any, form cycles untouched by the extracted paths.
  return paths;
}

}  // namespace wedge
