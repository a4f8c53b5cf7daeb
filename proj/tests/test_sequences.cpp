// Block sequences: regime-specific breakpoint construction, block/prime
// regions, width splitting, the iota index, and the assumption audit.
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/sequences.hpp"
#include "wedge_fpp/wedge_function.hpp"

using namespace wedge;

namespace {

void check_strictly_increasing(const std::vector<long long>& r) {
  REQUIRE(!r.empty());
  CHECK(r.front() == 0);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
}

bool estimates_equal(const ProbabilityEstimate& a, const ProbabilityEstimate& b) {
  return a.n == b.n && a.samples == b.samples && a.hits == b.hits &&
         a.value == b.value && a.ci.lo == b.ci.lo && a.ci.hi == b.ci.hi &&
         a.rare == b.rare;
}

bool audits_equal(const AssumptionAudit& a, const AssumptionAudit& b) {
  if (a.i_values != b.i_values || a.m_list != b.m_list) return false;
  if (a.a1_threshold != b.a1_threshold || a.audit_index != b.audit_index)
    return false;
  if (a.a2_form_constant != b.a2_form_constant) return false;
  if (a.a1_pass != b.a1_pass || a.a2_pass != b.a2_pass ||
      a.a3_pass != b.a3_pass)
    return false;
  if (a.a1.size() != b.a1.size() || a.a2.size() != b.a2.size() ||
      a.a3.size() != b.a3.size())
    return false;
  for (std::size_t k = 0; k < a.a1.size(); ++k)
    if (!estimates_equal(a.a1[k], b.a1[k])) return false;
  for (std::size_t k = 0; k < a.a2.size(); ++k) {
    if (a.a2[k].n != b.a2[k].n || a.a2[k].samples != b.a2[k].samples)
      return false;
    if (a.a2[k].mean != b.a2[k].mean || a.a2[k].se != b.a2[k].se) return false;
  }
  for (std::size_t k = 0; k < a.a3.size(); ++k) {
    if (a.a3[k].size() != b.a3[k].size()) return false;
    for (std::size_t m = 0; m < a.a3[k].size(); ++m)
      if (!estimates_equal(a.a3[k][m], b.a3[k][m])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("critical sequence for the slowest wedge matches frozen values") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.0, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.5, 0.0, SequenceRegime::Critical, 30);

  CHECK(seq.regime == SequenceRegime::Critical);
  CHECK(seq.p == 0.5);
  CHECK(seq.j0 == 1);
  REQUIRE(seq.r.size() == 31);
  check_strictly_increasing(seq.r);

  // Level gaps below j0 contribute their top line; past j0 each gap of
  // width >= j is cut into blocks of width j to 2j-1.
  const std::vector<long long> head = {0,  2,  3,  4,  5,  6,  7,  10,
                                       12, 14, 16, 18, 20, 24, 27, 30};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(seq.r[i] == head[i]);

  CHECK(seq.blocks() == 29);
  CHECK(seq.prime_blocks() == 14);
  CHECK(seq.r_at(0) == 0);
  CHECK(seq.r_at(30) == seq.r.back());
  CHECK(seq.r_prime(7) == seq.r[14]);
  CHECK_THROWS_AS(seq.r_at(-1), ValidationError);
  CHECK_THROWS_AS(seq.r_at(31), ValidationError);
  CHECK_THROWS_AS(seq.r_prime(16), ValidationError);
}

TEST_CASE("subcritical-decay sequence uses exponential widths past j0") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.0, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.6, 1.4, SequenceRegime::SubXi, 12);

  CHECK(seq.j0 == 3);
  const std::vector<long long> expect = {0,   2,   7,   20,  54,  112, 148,
                                         257, 330, 403, 649, 798, 947};
  REQUIRE(seq.r.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(seq.r[i] == expect[i]);
  check_strictly_increasing(seq.r);
  CHECK(seq.blocks() == 11);
  CHECK(seq.prime_blocks() == 5);

  // Below j0 the breakpoints are exactly the level lines.
  CHECK(seq.r[1] == level(f, 1).ell);
  CHECK(seq.r[2] == level(f, 2).ell);
  CHECK(seq.r[3] == level(f, 3).ell);
}

TEST_CASE("height-matched sequence walks level lines when b = 0") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.2, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.6, 1.2, SequenceRegime::AtXi, 8);

  CHECK(seq.j0 == 0);
  const std::vector<long long> expect = {0, 2, 5, 12, 28, 64, 148, 341, 785};
  REQUIRE(seq.r.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(seq.r[i] == expect[i]);

  // With b = 0 the level index advances by 1, so r_i is the i-th level line.
  for (long long i = 1; i <= 8; ++i)
    CHECK(seq.r_at(i) == level(f, i).ell);
  CHECK(seq.blocks() == 7);
  CHECK(seq.prime_blocks() == 3);
}

TEST_CASE("height-matched sequence doubles the level index when b = a") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.0, 1.0);
  const BlockSequence seq =
      build_sequence(f, 0.6, 1.0, SequenceRegime::AtXi, 5);

  // j(i) doubles (step = j^{b/xi} = j), so r picks levels 1, 2, 4, 8, 16.
  const std::vector<long long> expect = {0, 1, 3, 14, 422, 619796};
  REQUIRE(seq.r.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(seq.r[i] == expect[i]);
  CHECK(seq.r_at(3) == level(f, 4).ell);
  CHECK(seq.r_at(5) == level(f, 16).ell);

  // Two more doublings would need level 64, far past the exact-integer
  // range of a double, and that must surface as a resource failure.
  CHECK_THROWS_AS(build_sequence(f, 0.6, 1.0, SequenceRegime::AtXi, 7),
                  ResourceError);
}

TEST_CASE("split_blocks folds the remainder into the first width") {
  const std::vector<long long> s = split_blocks(10, 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == 4);
  CHECK(s[1] == 3);
  CHECK(s[2] == 3);

  CHECK(split_blocks(7, 7) == std::vector<long long>{7});
  const std::vector<long long> t = split_blocks(13, 4);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == 5);

  for (long long n = 1; n <= 40; ++n)
    for (long long d = 1; d <= n; ++d) {
      const std::vector<long long> w = split_blocks(n, d);
      long long sum = 0;
      for (long long x : w) {
        CHECK(x >= d);
        CHECK(x <= 2 * d - 1);
        sum += x;
      }
      CHECK(sum == n);
    }

  CHECK_THROWS_AS(split_blocks(0, 3), ValidationError);
  CHECK_THROWS_AS(split_blocks(5, 0), ValidationError);
  CHECK_THROWS_AS(split_blocks(3, 5), ValidationError);
}

TEST_CASE("split_blocks_even makes exactly M near-equal widths") {
  const std::vector<long long> s = split_blocks_even(10, 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == 4);
  CHECK(s[1] == 3);
  CHECK(s[2] == 3);

  const std::vector<long long> ones = split_blocks_even(10, 10);
  REQUIRE(ones.size() == 10);
  for (long long x : ones) CHECK(x == 1);

  const std::vector<long long> u = split_blocks_even(7, 2);
  REQUIRE(u.size() == 2);
  CHECK(u[0] == 4);
  CHECK(u[1] == 3);

  for (long long n = 1; n <= 30; ++n)
    for (long long m = 1; m <= n; ++m) {
      const std::vector<long long> w = split_blocks_even(n, m);
      CHECK(static_cast<long long>(w.size()) == m);
      long long sum = 0;
      for (long long x : w) {
        CHECK(x >= 1);
        sum += x;
      }
      CHECK(sum == n);
    }

  CHECK_THROWS_AS(split_blocks_even(5, 7), ValidationError);
  CHECK_THROWS_AS(split_blocks_even(0, 1), ValidationError);
}

TEST_CASE("iota finds the first prime index covering a column") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.0, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.5, 0.0, SequenceRegime::Critical, 30);
  CHECK(iota(seq, 0) == 0);
  CHECK(iota(seq, 1) == 1);
  CHECK(iota(seq, 5) == 2);
  // Sanity on the definition: r_{2 iota} >= n and the previous even line is
  // strictly below n.
  for (long long n : {0LL, 1LL, 5LL, 11LL, 19LL, 27LL}) {
    const long long i = iota(seq, n);
    CHECK(seq.r_prime(i) >= n);
    if (i > 0) CHECK(seq.r_prime(i - 1) < n);
  }

  BlockSequence hand;
  hand.r = {0, 1, 2, 3, 4, 5, 6};
  CHECK(iota(hand, 5) == 3);
  hand.r = {0, 3, 7, 12, 20};
  CHECK(iota(hand, 8) == 2);
  CHECK(iota(hand, 0) == 0);

  hand.r = {0, 2, 4};
  CHECK(iota(hand, 4) == 1);
  CHECK_THROWS_AS(iota(hand, 5), ValidationError);
  CHECK_THROWS_AS(iota(hand, -1), ValidationError);
}

TEST_CASE("block and prime regions cover adjacent column ranges") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.0, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.5, 0.0, SequenceRegime::Critical, 30);
  const WedgeGraph g = build_graph(f, seq.r.back());

  const BlockRegion b7 = block_region(seq, g, 7);
  CHECK(b7.g == &g);
  CHECK(b7.x_lo == 10);
  CHECK(b7.x_hi == 12);

  const BlockRegion p3 = prime_region(seq, g, 3);
  CHECK(p3.x_lo == seq.r[6]);
  CHECK(p3.x_hi == seq.r[8]);

  // Consecutive blocks share exactly their boundary line, and the j-th
  // prime region is the union of blocks 2j and 2j+1.
  for (long long i = 0; i + 1 <= seq.blocks(); ++i) {
    CHECK(block_region(seq, g, i).x_hi == block_region(seq, g, i + 1).x_lo);
  }
  for (long long j = 0; j <= seq.prime_blocks(); ++j) {
    const BlockRegion pr = prime_region(seq, g, j);
    CHECK(pr.x_lo == block_region(seq, g, 2 * j).x_lo);
    CHECK(pr.x_hi == block_region(seq, g, 2 * j + 1).x_hi);
  }
}

TEST_CASE("build_sequence rejects mismatched regime parameters") {
  const WedgeFunction slow = WedgeFunction::log_loglog(1.0, 0.0);
  const WedgeFunction fast = WedgeFunction::log_loglog(1.2, 0.0);
  const WedgeFunction steep = WedgeFunction::log_loglog(1.0, 3.0);
  const WedgeFunction power = WedgeFunction::power_law(0.5);

  CHECK_THROWS_AS(build_sequence(power, 0.5, 0.0, SequenceRegime::Critical, 8),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(slow, 0.5, 0.0, SequenceRegime::Critical, 1),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(slow, 0.6, 0.0, SequenceRegime::Critical, 8),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(slow, 0.4, 1.4, SequenceRegime::SubXi, 8),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(fast, 0.6, 1.0, SequenceRegime::SubXi, 8),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(slow, 0.6, 0.0, SequenceRegime::SubXi, 8),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(slow, 0.5, 1.0, SequenceRegime::AtXi, 8),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(slow, 0.6, 1.4, SequenceRegime::AtXi, 8),
                  ValidationError);
  CHECK_THROWS_AS(build_sequence(steep, 0.6, 1.0, SequenceRegime::AtXi, 8),
                  ValidationError);
}

TEST_CASE("audit on an always-open field is fully determined") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.2, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.6, 1.2, SequenceRegime::AtXi, 8);
  const WeightModel model = WeightModel::constant(1.0);

  AuditOptions opt;
  opt.i_lo = 2;
  opt.i_hi = 5;
  opt.samples = 40;
  opt.seed = 7;
  const AssumptionAudit audit = audit_assumptions(f, seq, model, opt);

  REQUIRE(audit.i_values == std::vector<long long>({2, 3, 4, 5}));
  CHECK(audit.m_list == std::vector<long long>({1, 2}));
  CHECK(audit.a1_threshold == 0.5);

  // Every block crosses, every increment is zero, no closed-passage tail.
  for (const auto& e : audit.a1) {
    CHECK(e.hits == 40);
    CHECK(e.value == 1.0);
    CHECK(!e.rare);
  }
  CHECK(audit.audit_index == 2);
  CHECK(audit.a1_pass);
  for (const auto& m : audit.a2) {
    CHECK(m.mean == 0.0);
    CHECK(m.se == 0.0);
  }
  CHECK(audit.a2_form_constant == 0.0);
  CHECK(audit.a2_pass);
  REQUIRE(audit.a3.size() == 4);
  for (const auto& row : audit.a3) {
    REQUIRE(row.size() == 2);
    for (const auto& e : row) CHECK(e.hits == 0);
  }
  CHECK(!audit.a3_pass);
}

TEST_CASE("critical audit is reproducible and worker-invariant") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.0, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.5, 0.0, SequenceRegime::Critical, 30);
  const WeightModel model = WeightModel::constant(0.5);

  AuditOptions opt;
  opt.i_lo = 2;
  opt.i_hi = 6;
  opt.samples = 60;
  opt.seed = 2024;
  const AssumptionAudit one = audit_assumptions(f, seq, model, opt);
  const AssumptionAudit two = audit_assumptions(f, seq, model, opt);
  CHECK(audits_equal(one, two));

  AuditOptions wide = opt;
  wide.workers = 3;
  const AssumptionAudit three = audit_assumptions(f, seq, model, wide);
  CHECK(audits_equal(one, three));

  CHECK(one.a1_threshold == 0.25);
  REQUIRE(one.a1.size() == 5);
  for (const auto& e : one.a1) {
    CHECK(e.samples == 60);
    CHECK(e.value >= 0.0);
    CHECK(e.value <= 1.0);
  }
  for (const auto& m : one.a2) CHECK(m.mean >= 0.0);
  // The closed-passage tail events are nested across the m list.
  for (const auto& row : one.a3) {
    REQUIRE(row.size() == 2);
    CHECK(row[0].hits >= row[1].hits);
  }
}

TEST_CASE("audit rejects bad ranges and sample counts") {
  const WedgeFunction f = WedgeFunction::log_loglog(1.2, 0.0);
  const BlockSequence seq =
      build_sequence(f, 0.6, 1.2, SequenceRegime::AtXi, 8);
  const WeightModel model = WeightModel::constant(0.6);

  AuditOptions opt;
  opt.i_lo = 2;
  opt.i_hi = 5;
  opt.samples = 40;

  AuditOptions bad = opt;
  bad.i_lo = -1;
  CHECK_THROWS_AS(audit_assumptions(f, seq, model, bad), ValidationError);
  bad = opt;
  bad.i_hi = 1;
  CHECK_THROWS_AS(audit_assumptions(f, seq, model, bad), ValidationError);
  bad = opt;
  bad.i_hi = 8;  // needs r[9], one past the built sequence
  CHECK_THROWS_AS(audit_assumptions(f, seq, model, bad), ValidationError);
  bad = opt;
  bad.samples = 19;
  CHECK_THROWS_AS(audit_assumptions(f, seq, model, bad), ValidationError);
}
