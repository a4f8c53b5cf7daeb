#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wedge_fpp/dual_crossings.hpp"
#include "wedge_fpp/rng.hpp"
#include "wedge_fpp/shortest_path.hpp"
#include "wedge_fpp/weights.hpp"

using namespace wedge;

namespace {

long long bernoulli_passage(const WedgeGraph& g, const WeightField& field) {
  PassageTimeQuery q;
  q.source = PassageTimeQuery::origin();
  q.target = PassageTimeQuery::line(g.n);
  q.mode = PassageTimeQuery::Mode::Bernoulli;
  return static_cast<long long>(passage_time(g, field, q).value + 0.5);
}

std::vector<long long> column_vertices(const WedgeGraph& g, long long x) {
  std::vector<long long> out;
  for (long long y = 0; y <= g.heights[static_cast<std::size_t>(x)]; ++y)
    out.push_back(g.vertex_id(x, y));
  return out;
}

}  // namespace

// The three quantities tied together by the flow identity: Bernoulli passage
// time, max edge-disjoint closed dual crossings, and max disjoint closed
// separating sets. On tiny graphs all three are computed independently.
TEST_CASE("triple identity on exhaustively checkable graphs") {
  const std::vector<WedgeFunction> shapes = {
      WedgeFunction::custom({0.0, 1.0, 1.0, 1.0}),
      WedgeFunction::custom({0.0, 1.0, 2.0, 2.0}),
      WedgeFunction::custom({0.0, 0.0, 1.0, 1.0, 2.0}),
      WedgeFunction::custom({0.0, 2.0, 2.0, 3.0}),
  };
  long long checked = 0;
  for (const WedgeFunction& f : shapes) {
    const long long n = static_cast<long long>(f.table.size()) - 1;
    const WedgeGraph g = build_graph(f, n);
    REQUIRE(g.edge_count <= 14);
    for (double p : {0.3, 0.5, 0.7}) {
      for (int rep = 0; rep < 40; ++rep) {
        const WeightField field =
            sample_weight_field(WeightModel::constant(p), g, 606,
                                derive_stream(rep, static_cast<int>(p * 10)));

        const long long t_b = bernoulli_passage(g, field);
        const CrossingCount dual = dual_separating_count(g, field);
        const long long cuts = oracle::max_disjoint_closed_cuts(g, field);
        const double exact = oracle::exhaustive_passage(
            g, field, {g.vertex_id(0, 0)}, column_vertices(g, n), true);

        CHECK(t_b == dual.value);
        CHECK(t_b == cuts);
        CHECK(static_cast<double>(t_b) == exact);
        check_dual_certificate(g, field, dual);
        ++checked;
      }
    }
  }
  CHECK(checked == 480);
}

TEST_CASE("duality holds on larger graphs across shapes and densities") {
  for (double a : {0.6, 1.0}) {
    const auto f = WedgeFunction::log_loglog(a, a);
    for (long long n : {25ll, 60ll}) {
      const WedgeGraph g = build_graph(f, n);
      for (double p : {0.35, 0.5, 0.65}) {
        for (int rep = 0; rep < 12; ++rep) {
          const WeightField field = sample_weight_field(
              WeightModel::constant(p), g, 1818,
              derive_stream(rep, n, static_cast<int>(p * 100)));
          const long long t_b = bernoulli_passage(g, field);
          const CrossingCount dual = dual_separating_count(g, field);
          CHECK(t_b == dual.value);
          check_dual_certificate(g, field, dual);
          CHECK(static_cast<long long>(dual.certificate.size()) == dual.value);
        }
      }
    }
  }
}

TEST_CASE("certificate paths use closed edges only and stay disjoint") {
  const WedgeGraph g = build_graph(WedgeFunction::log_loglog(1.0, 1.0), 40);
  const WeightField field =
      sample_weight_field(WeightModel::constant(0.5), g, 2025, 9);
  const CrossingCount dual = dual_separating_count(g, field);
  std::vector<char> used(static_cast<std::size_t>(g.edge_count), 0);
  for (const DualPath& path : dual.certificate) {
    REQUIRE(path.size() >= 2);
    for (std::size_t i = 1; i < path.size(); ++i) {
      REQUIRE(dual_edge_exists(g, path[i - 1], path[i]));
      const long long e = dual_edge_primal_id(g, path[i - 1], path[i]);
      CHECK(field.closed(e));
      CHECK(!used[static_cast<std::size_t>(e)]);
      used[static_cast<std::size_t>(e)] = 1;
    }
  }
}

TEST_CASE("per-level counts dominate the full count") {
  const WedgeGraph g = build_graph(WedgeFunction::log_loglog(1.0, 0.0), 50);
  for (int rep = 0; rep < 10; ++rep) {
    const WeightField field = sample_weight_field(
        WeightModel::constant(0.5), g, 3333, derive_stream(1, rep));
    const long long full = dual_separating_count(g, field).value;
    long long level_total = 0;
    for (long long j = 0; j <= g.top_height; ++j) {
      const CrossingCount lv = dual_level_count(g, field, j);
      check_dual_certificate(g, field, lv, j);
      // A level's sources are a subset of the full top boundary.
      CHECK(lv.value <= full);
      level_total += lv.value;
    }
    // Levels partition the sources, so the sum can only overcount.
    CHECK(level_total >= full);
  }
}

TEST_CASE("degenerate fields") {
  const WedgeGraph g = build_graph(WedgeFunction::log_loglog(1.0, 0.0), 30);

  // All edges open: no closed dual path exists at all.
  const WeightField open_field =
      sample_weight_field(WeightModel::constant(1.0), g, 5, 0);
  const CrossingCount none = dual_separating_count(g, open_field);
  CHECK(none.value == 0);
  CHECK(none.certificate.empty());
  CHECK(bernoulli_passage(g, open_field) == 0);

  // All edges closed: the passage time is the minimal closed-edge count,
  // which the dual certificate must match exactly.
  const WeightField closed_field =
      sample_weight_field(WeightModel::constant(0.0), g, 5, 0);
  const CrossingCount all = dual_separating_count(g, closed_field);
  CHECK(all.value == bernoulli_passage(g, closed_field));
  check_dual_certificate(g, closed_field, all);
}

TEST_CASE("dual adjacency maps back to the right primal edge") {
  const WedgeGraph g = build_graph(WedgeFunction::custom({0.0, 1.0, 2.0, 2.0}), 3);
  // Vertical dual edge (k, y-1)-(k, y) crosses the horizontal primal edge
  // at ((k, y), (k+1, y)).
  CHECK(dual_edge_exists(g, DualPoint{1, 0}, DualPoint{1, 1}));
  CHECK(dual_edge_primal_id(g, DualPoint{1, 0}, DualPoint{1, 1}) ==
        g.horizontal_edge_id(1, 1));
  // Horizontal dual edge (l-1, y)-(l, y) crosses the vertical primal edge
  // at ((l, y), (l, y+1)).
  CHECK(dual_edge_exists(g, DualPoint{0, 0}, DualPoint{1, 0}));
  CHECK(dual_edge_primal_id(g, DualPoint{0, 0}, DualPoint{1, 0}) ==
        g.vertical_edge_id(1, 0));
  // No wedge edge between dual points outside the region.
  CHECK_FALSE(dual_edge_exists(g, DualPoint{0, 5}, DualPoint{0, 6}));
  CHECK_FALSE(dual_edge_exists(g, DualPoint{0, 0}, DualPoint{2, 0}));
}
