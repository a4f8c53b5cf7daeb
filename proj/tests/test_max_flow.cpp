#include <array>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wedge_fpp/max_flow.hpp"
#include "wedge_fpp/rng.hpp"

using namespace wedge;

TEST_CASE("dinic agrees with augmenting-path search on random networks") {
  const Philox4x64 gen(2718, 0);
  std::uint64_t ctr = 0;
  const auto rnd = [&](long long m) {
    return static_cast<long long>(gen.word(ctr++, 0, 0) %
                                  static_cast<std::uint64_t>(m));
  };

  for (int rep = 0; rep < 300; ++rep) {
    const long long nodes = 2 + rnd(8);
    const long long arcs = 1 + rnd(25);
    FlowNetwork net(nodes);
    std::vector<std::array<long long, 3>> ref_arcs;
    for (long long i = 0; i < arcs; ++i) {
      const long long from = rnd(nodes);
      const long long to = rnd(nodes);
      if (from == to) continue;
      const long long cap = 1 + rnd(4);
      net.add_arc(from, to, cap);
      ref_arcs.push_back({from, to, cap});
    }
    const long long s = 0;
    const long long t = nodes - 1;
    const long long got = net.max_flow(s, t);
    const long long want = oracle::max_flow_reference(nodes, ref_arcs, s, t);
    CHECK(got == want);

    // Min cut from residual reachability: arcs leaving the reachable side
    // are saturated, so their flows sum to the cut capacity and the value.
    const std::vector<char> reach = net.residual_reachable(s);
    CHECK(reach[static_cast<std::size_t>(s)]);
    CHECK_FALSE(reach[static_cast<std::size_t>(t)]);  // no augmenting path left
    long long cut = 0;
    std::size_t ref_idx = 0;
    for (long long a = 0; a < net.arc_count(); a += 2, ++ref_idx) {
      const bool crossing_cut =
          reach[static_cast<std::size_t>(net.arc_from(a))] &&
          !reach[static_cast<std::size_t>(net.arc_to(a))];
      if (crossing_cut) {
        CHECK(net.arc_flow(a) == ref_arcs[ref_idx][2]);  // saturated
        cut += ref_arcs[ref_idx][2];
      }
    }
    CHECK(cut == got);
  }
}

TEST_CASE("flow conservation holds arc by arc") {
  FlowNetwork net(6);
  net.add_arc(0, 1, 3);
  net.add_arc(0, 2, 2);
  net.add_arc(1, 3, 2);
  net.add_arc(2, 3, 2);
  net.add_arc(1, 2, 1);
  net.add_arc(3, 4, 10);
  net.add_arc(4, 5, 4);
  const long long v = net.max_flow(0, 5);
  CHECK(v == 4);

  const std::vector<long long> caps = {3, 2, 2, 2, 1, 10, 4};
  std::vector<long long> net_out(6, 0);
  for (long long a = 0; a < net.arc_count(); a += 2) {
    const long long fl = net.arc_flow(a);
    CHECK(fl >= 0);
    CHECK(fl <= caps[static_cast<std::size_t>(a / 2)]);
    // Flow plus residual reconstructs the original capacity.
    CHECK(fl + net.arc_capacity(a) == caps[static_cast<std::size_t>(a / 2)]);
    net_out[static_cast<std::size_t>(net.arc_from(a))] += fl;
    net_out[static_cast<std::size_t>(net.arc_to(a))] -= fl;
  }
  CHECK(net_out[0] == v);
  CHECK(net_out[5] == -v);
  for (int i = 1; i <= 4; ++i) CHECK(net_out[static_cast<std::size_t>(i)] == 0);
}

TEST_CASE("unit path decomposition covers the flow with simple paths") {
  const Philox4x64 gen(31337, 1);
  std::uint64_t ctr = 0;
  const auto rnd = [&](long long m) {
    return static_cast<long long>(gen.word(ctr++, 0, 0) %
                                  static_cast<std::uint64_t>(m));
  };

  for (int rep = 0; rep < 200; ++rep) {
    const long long nodes = 2 + rnd(7);
    FlowNetwork net(nodes);
    std::set<std::pair<long long, long long>> used;
    const long long tries = 1 + rnd(20);
    for (long long i = 0; i < tries; ++i) {
      const long long from = rnd(nodes);
      const long long to = rnd(nodes);
      if (from == to || used.count({from, to})) continue;
      used.insert({from, to});
      net.add_arc(from, to, 1);  // unit capacities
    }
    const long long s = 0;
    const long long t = nodes - 1;
    const long long v = net.max_flow(s, t);
    const std::vector<FlowPath> paths = decompose_unit_paths(net, s, t);
    CHECK(static_cast<long long>(paths.size()) == v);

    std::set<std::pair<long long, long long>> taken;
    for (const FlowPath& p : paths) {
      REQUIRE(p.size() >= 2);
      CHECK(p.front() == s);
      CHECK(p.back() == t);
      // Simple path: no repeated vertex.
      std::set<long long> verts(p.begin(), p.end());
      CHECK(verts.size() == p.size());
      for (std::size_t i = 1; i < p.size(); ++i) {
        const auto arc = std::make_pair(p[i - 1], p[i]);
        CHECK(used.count(arc));        // follows an existing arc
        CHECK(!taken.count(arc));      // arc-disjointness
        taken.insert(arc);
      }
    }
  }
}

TEST_CASE("opposite unit pushes cancel in the decomposition") {
  // Two crossing routes force flow through a shared middle pair in both
  // directions once the algorithm reroutes; net decomposition must still be
  // two clean paths.
  FlowNetwork net(6);
  net.add_arc(0, 1, 1);
  net.add_arc(0, 2, 1);
  net.add_arc(1, 3, 1);
  net.add_arc(2, 4, 1);
  net.add_arc(1, 4, 1);
  net.add_arc(2, 3, 1);
  net.add_arc(3, 5, 1);
  net.add_arc(4, 5, 1);
  CHECK(net.max_flow(0, 5) == 2);
  const auto paths = decompose_unit_paths(net, 0, 5);
  CHECK(paths.size() == 2);
  for (const FlowPath& p : paths) {
    CHECK(p.front() == 0);
    CHECK(p.back() == 5);
    std::set<long long> verts(p.begin(), p.end());
    CHECK(verts.size() == p.size());
  }
}

TEST_CASE("zero flow when source equals sink component is cut off") {
  FlowNetwork net(4);
  net.add_arc(0, 1, 5);
  net.add_arc(2, 3, 5);
  CHECK(net.max_flow(0, 3) == 0);
  CHECK(decompose_unit_paths(net, 0, 3).empty());
}
