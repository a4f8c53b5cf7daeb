#pragma once

#include <cstdint>
#include <vector>

namespace wedge {

// Integer-capacity flow network with Dinic's algorithm. Arcs are added in
// pairs (forward capacity, zero-capacity reverse) so the residual graph is
// explicit. Node ids are dense [0, node_count).
class FlowNetwork {
 public:
  explicit FlowNetwork(long long node_count);

  // Adds a directed arc and returns its index (even; the reverse arc is
  // index+1). Capacity must be nonnegative.
  long long add_arc(long long from, long long to, long long capacity);

  long long node_count() const { return static_cast<long long>(head_.size()); }
  long long arc_count() const { return static_cast<long long>(to_.size()); }

  long long arc_from(long long a) const { return from_[static_cast<std::size_t>(a)]; }
  long long arc_to(long long a) const { return to_[static_cast<std::size_t>(a)]; }
  long long arc_capacity(long long a) const { return cap_[static_cast<std::size_t>(a)]; }
  // Flow pushed along arc a (capacity minus residual), valid after max_flow.
  long long arc_flow(long long a) const;

  // Computes the maximum s-t flow. Residual capacities stay in place so the
  // caller can decompose the flow or extract a cut.
  long long max_flow(long long s, long long t);

  // Nodes reachable from s in the residual graph of the last max_flow call.
  // The arcs from reached to unreached saturated forward arcs form a minimum
  // cut.
  std::vector<char> residual_reachable(long long s) const;

 private:
  bool bfs_levels(long long s, long long t);
  long long dfs_push(long long v, long long t, long long limit);

  std::vector<long long> head_;   // per node: first arc index or -1
  std::vector<long long> next_;   // per arc: next arc of same node
  std::vector<long long> from_, to_, cap_, orig_cap_;
  std::vector<long long> level_, iter_;
};

// One source-to-sink unit path extracted from an integer flow.
using FlowPath = std::vector<long long>;  // node ids, s first, t last

// Decomposes the current flow of `net` (after max_flow) into unit paths from
// s to t. Works on net flow per arc pair, so opposite pushes cancel and the
// returned paths are arc-disjoint in the undirected sense.
std::vector<FlowPath> decompose_unit_paths(const FlowNetwork& net,
                                           long long s, long long t);

}  // namespace wedge
