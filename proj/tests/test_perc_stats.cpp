#include <cmath>
#include <queue>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/perc_stats.hpp"

using namespace wedge;

namespace {

// Monte Carlo check against an exact value: the estimate must sit within
// six binomial standard errors, a one-in-a-billion false alarm rate.
void check_against_exact(double estimate, double exact, long long samples) {
  const double se =
      std::sqrt(std::max(exact * (1.0 - exact), 1e-12) /
                static_cast<double>(samples));
  CHECK(std::abs(estimate - exact) <= 6.0 * se + 1e-12);
}

// Origin cluster over the open bits of a TinyLattice, by plain BFS.
std::vector<char> origin_cluster(const oracle::TinyLattice& t,
                                 const std::vector<char>& open) {
  std::vector<std::vector<std::pair<long long, std::size_t>>> adj(
      static_cast<std::size_t>(t.vertex_count()));
  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    const auto& e = t.edges[i];
    const long long u = t.vid(e[0], e[1]), v = t.vid(e[2], e[3]);
    adj[static_cast<std::size_t>(u)].push_back({v, i});
    adj[static_cast<std::size_t>(v)].push_back({u, i});
  }
  std::vector<char> in(static_cast<std::size_t>(t.vertex_count()), 0);
  std::queue<long long> q;
  in[static_cast<std::size_t>(t.vid(0, 0))] = 1;
  q.push(t.vid(0, 0));
  while (!q.empty()) {
    const long long u = q.front();
    q.pop();
    for (const auto& [v, ei] : adj[static_cast<std::size_t>(u)]) {
      if (open[ei] && !in[static_cast<std::size_t>(v)]) {
        in[static_cast<std::size_t>(v)] = 1;
        q.push(v);
      }
    }
  }
  return in;
}

}  // namespace

TEST_CASE("box event at n = 1 has a closed form that pins both paths") {
  // At n = 1 every neighbor of the origin lies on the square boundary, so
  // the event is simply "some incident edge is open": 1 - (1-p)^4.
  const double p = 0.4;
  const double closed_form = 1.0 - std::pow(1.0 - p, 4);

  // The enumeration oracle over the full 12-edge square must agree.
  const oracle::TinyLattice t = oracle::make_tiny(-1, 1, -1, 1);
  REQUIRE(t.edges.size() == 12);
  const double exact = oracle::exact_probability(
      t, p, [&](const std::vector<char>& open) {
        return oracle::tiny_box_event(t, open, 1);
      });
  CHECK(exact == doctest::Approx(closed_form).epsilon(1e-12));

  const long long samples = 40000;
  const BoxPlanePair pair =
      estimate_point_to_box_and_plane(p, 1, samples, 20240, 1);
  check_against_exact(pair.box.value, exact, samples);

  // The plane event is contained in the box event sample by sample.
  CHECK(pair.plane.hits <= pair.box.hits);
  CHECK(pair.plane.value <= pair.box.value);
  CHECK(pair.box.samples == samples);
  CHECK_FALSE(pair.box.rare);
}

TEST_CASE("pinched-cluster probability at n = 1 matches full enumeration") {
  const double p = 0.45;
  const oracle::TinyLattice t = oracle::make_tiny(0, 1, -3, 3);
  REQUIRE(t.edges.size() == 19);
  const double exact = oracle::exact_probability(
      t, p, [&](const std::vector<char>& open) {
        return oracle::tiny_pinpoint_event(t, open);
      });
  REQUIRE(exact > 0.0);
  REQUIRE(exact < 1.0);

  const long long samples = 30000;
  const ProbabilityEstimate est = estimate_Hn(p, 1, samples, 555, 1);
  check_against_exact(est.value, exact, samples);
}

TEST_CASE("mean column count at n = 1 matches full enumeration") {
  const double p = 0.5;
  const oracle::TinyLattice t = oracle::make_tiny(0, 1, -3, 3);
  const double exact = oracle::exact_mean(
      t, p, [&](const std::vector<char>& open) {
        const std::vector<char> in = origin_cluster(t, open);
        double cnt = 0.0;
        for (long long y = t.y_lo; y <= t.y_hi; ++y)
          if (in[static_cast<std::size_t>(t.vid(1, y))]) cnt += 1.0;
        return cnt;
      });

  const long long samples = 30000;
  const MeanEstimate est = estimate_Gn(p, 1, samples, 808, 1);
  CHECK(est.se > 0.0);
  CHECK(std::abs(est.mean - exact) <= 6.0 * est.se);
}

TEST_CASE("rectangle crossing probability matches full enumeration") {
  const double p = 0.45;
  const oracle::TinyLattice t = oracle::make_tiny(0, 2, 0, 2);
  REQUIRE(t.edges.size() == 12);
  const double exact = oracle::exact_probability(
      t, p, [&](const std::vector<char>& open) {
        return oracle::tiny_left_right_event(t, open);
      });

  const long long samples = 40000;
  const ProbabilityEstimate est =
      estimate_rect_crossing(p, 2, 2, samples, 31415, 1);
  check_against_exact(est.value, exact, samples);
}

TEST_CASE("mean crossing count matches full enumeration") {
  const double p = 0.55;
  const oracle::TinyLattice t = oracle::make_tiny(0, 2, 0, 2);
  const double exact = oracle::exact_mean(
      t, p, [&](const std::vector<char>& open) {
        return static_cast<double>(oracle::tiny_left_right_count(t, open));
      });

  const long long samples = 30000;
  const MeanEstimate est =
      estimate_mean_crossing_count(p, 2, 2, samples, 2772, 1);
  CHECK(est.se > 0.0);
  CHECK(std::abs(est.mean - exact) <= 6.0 * est.se);
}

TEST_CASE("point-to-plane estimates decay in n and flag rare counts") {
  // Subcritical: reach probabilities fall off exponentially, so the gap
  // between n = 2 and n = 6 dwarfs the Monte Carlo noise.
  const ProbabilityEstimate near2 =
      estimate_point_to_plane(0.35, 2, 4000, 11, 1);
  const ProbabilityEstimate near6 =
      estimate_point_to_plane(0.35, 6, 4000, 11, 1);
  CHECK(near2.value > 0.0);
  CHECK(near6.value < near2.value);
  CHECK(near2.ci.lo <= near2.value);
  CHECK(near2.value <= near2.ci.hi);

  // Deep subcritical reach: nearly impossible, so the rare flag must trip.
  const ProbabilityEstimate rare =
      estimate_point_to_plane(0.08, 12, 500, 12, 1);
  CHECK(rare.rare);
}

TEST_CASE("estimators are deterministic and worker-invariant") {
  const ProbabilityEstimate a = estimate_point_to_plane(0.5, 6, 3000, 7, 1);
  const ProbabilityEstimate b = estimate_point_to_plane(0.5, 6, 3000, 7, 4);
  CHECK(a.hits == b.hits);
  CHECK(a.value == b.value);

  const XiEstimate xa = estimate_xi(0.3, 12, 2500, 99, 1);
  const XiEstimate xb = estimate_xi(0.3, 12, 2500, 99, 4);
  CHECK(xa.xi == xb.xi);
  CHECK(xa.slope == xb.slope);
  REQUIRE(xa.points.size() == xb.points.size());
  for (std::size_t i = 0; i < xa.points.size(); ++i)
    CHECK(xa.points[i].hits == xb.points[i].hits);
}

TEST_CASE("xi estimate structure at a subcritical density") {
  const XiEstimate xi = estimate_xi(0.3, 14, 3000, 4242, 1);
  CHECK(xi.p == 0.3);
  CHECK(static_cast<long long>(xi.points.size()) == 14);
  CHECK(xi.slope > 0.0);  // connection probabilities fall with distance
  CHECK(xi.xi == doctest::Approx(1.0 / xi.slope).epsilon(1e-9));
  CHECK(xi.xi_se > 0.0);
  CHECK(xi.n_lo >= 1);
  CHECK(xi.n_lo < xi.n_hi);
  CHECK(xi.n_hi <= 14);
  // Window starts past the short-range prefactor and ends before the hit
  // counts go rare.
  CHECK(xi.points[static_cast<std::size_t>(xi.n_lo - 1)].value < 0.5);
  CHECK(xi.points[static_cast<std::size_t>(xi.n_hi - 1)].hits >= 10);
}

TEST_CASE("sponge heights follow their driver families") {
  CHECK(sponge_height(SpongeFamily::ShrinkingDriver, 1.0, 1.0, 4) == 8);
  CHECK(sponge_height(SpongeFamily::ExplodingDriver, 1.0, 1.0, 4) == 404);
  CHECK(sponge_height(SpongeFamily::ConstantDriver, 1.0, 1.0, 4) == 55);
  CHECK(sponge_height(SpongeFamily::ConstantDriver, 1.0, 2.5, 4) ==
        static_cast<long long>(std::ceil(2.5 * std::exp(4.0))));
  // Heights grow with n within a family.
  CHECK(sponge_height(SpongeFamily::ShrinkingDriver, 1.0, 1.0, 8) >
        sponge_height(SpongeFamily::ShrinkingDriver, 1.0, 1.0, 4));
}

TEST_CASE("sponge n list fits the cell budget") {
  const std::vector<long long> ns =
      sponge_default_n_list(SpongeFamily::ShrinkingDriver, 1.0, 1.0, 50000000);
  REQUIRE(ns.size() >= 3);
  CHECK(ns.front() == 4);
  for (std::size_t i = 1; i < ns.size(); ++i) CHECK(ns[i] == ns[i - 1] + 4);
  for (const long long n : ns) {
    const long long h = sponge_height(SpongeFamily::ShrinkingDriver, 1.0, 1.0, n);
    CHECK((n + 1) * (h + 1) <= 50000000);
  }
  CHECK_THROWS_AS(
      sponge_default_n_list(SpongeFamily::ExplodingDriver, 1.0, 1.0, 100),
      ResourceError);
}

TEST_CASE("sponge scan reports coherent points") {
  const std::vector<long long> ns = {4, 8, 12};
  const SpongeScan scan = sponge_phase_scan(
      0.35, SpongeFamily::ShrinkingDriver, 1.2, 1.0, ns, 400, 606, 50000000, 1);
  CHECK(scan.family == SpongeFamily::ShrinkingDriver);
  CHECK(scan.xi_hat == 1.2);
  REQUIRE(scan.points.size() == 3);
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const SpongePoint& pt = scan.points[i];
    CHECK(pt.n == ns[i]);
    CHECK(pt.h == sponge_height(SpongeFamily::ShrinkingDriver, 1.2, 1.0, pt.n));
    CHECK(pt.driver ==
          doctest::Approx(static_cast<double>(pt.h) *
                          std::exp(-static_cast<double>(pt.n) / 1.2)));
    CHECK(pt.prob.value >= 0.0);
    CHECK(pt.prob.value <= 1.0);
    CHECK(pt.prob.samples == 400);
  }
  CHECK(sponge_verdict_name(scan.verdict) != nullptr);
  CHECK(sponge_family_name(scan.family) ==
        doctest::String("shrinking-driver"));
}

TEST_CASE("estimator input validation") {
  CHECK_THROWS_AS(estimate_point_to_plane(1.5, 4, 100, 1, 1), ValidationError);
  CHECK_THROWS_AS(estimate_point_to_plane(0.5, 0, 100, 1, 1), ValidationError);
  CHECK_THROWS_AS(estimate_point_to_plane(0.5, 4, 0, 1, 1), ValidationError);
  CHECK_THROWS_AS(estimate_xi(0.5, 2, 100, 1, 1), ValidationError);
  CHECK_THROWS_AS(estimate_rect_crossing(0.5, 0, 2, 100, 1, 1),
                  ValidationError);
}
