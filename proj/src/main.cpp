// wedge-fpp command line. Each subcommand archives its config next to its
// outputs; outputs carry no timestamps or worker counts, so reruns with the
// same config and seed are byte-identical at any worker count.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wedge_fpp/dual_crossings.hpp"
#include "wedge_fpp/errors.hpp"
#include "wedge_fpp/harness.hpp"
#include "wedge_fpp/io_util.hpp"
#include "wedge_fpp/martingale.hpp"
#include "wedge_fpp/parallel.hpp"
#include "wedge_fpp/perc_stats.hpp"
#include "wedge_fpp/regimes.hpp"
#include "wedge_fpp/rng.hpp"
#include "wedge_fpp/sequences.hpp"
#include "wedge_fpp/shortest_path.hpp"
#include "wedge_fpp/stats.hpp"
#include "wedge_fpp/weights.hpp"

namespace {

using nlohmann::json;
using namespace wedge;

struct CommonOpts {
  std::string out = "wedge-out";
  std::uint64_t seed_flag = 0;
  CLI::Option* seed_opt = nullptr;
  int workers = 1;
  bool strict = false;

  std::uint64_t seed() const {
    std::optional<std::uint64_t> flag;
    if (seed_opt != nullptr && seed_opt->count() > 0) flag = seed_flag;
    return resolve_seed(flag);
  }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "Output directory (created if missing)")
      ->capture_default_str();
  c.seed_opt = cmd->add_option(
      "--seed", c.seed_flag,
      "RNG seed (default: WEDGE_FPP_SEED env var, then 12345)");
  cmd->add_option("--workers", c.workers, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", c.strict,
                "Exit 3 when a statistical acceptance check fails");
}

struct WedgeOpts {
  std::string kind = "logloglog";
  double a = 1.0;
  double b = 0.0;

  WedgeFunction build() const {
    if (kind == "logloglog") return WedgeFunction::log_loglog(a, b);
    if (kind == "power") return WedgeFunction::power_law(a);
    if (kind == "logpower") return WedgeFunction::log_power(a);
    throw ValidationError("unknown wedge kind: " + kind);
  }

  json to_config() const {
    json c{{"kind", kind}, {"a", a}};
    if (kind == "logloglog") c["b"] = b;
    return c;
  }
};

void add_wedge(CLI::App* cmd, WedgeOpts& w, bool logloglog_only = false) {
  if (!logloglog_only) {
    cmd->add_option("--kind", w.kind, "Wedge family: logloglog, power, logpower")
        ->capture_default_str()
        ->check(CLI::IsMember({"logloglog", "power", "logpower"}));
  }
  cmd->add_option("--a", w.a, "Wedge coefficient a")->capture_default_str();
  cmd->add_option("--b", w.b, "Wedge coefficient b (logloglog only)")
      ->capture_default_str();
}

struct LawOpts {
  double p = 0.5;
  std::string law = "constant";
  double delta = 1.0;
  double rate = 1.0;
  double exponent = 4.5;

  WeightModel build() const {
    if (law == "constant") return WeightModel::constant(p, delta);
    if (law == "shiftexp") return WeightModel::shifted_exponential(p, delta, rate);
    if (law == "pareto") return WeightModel::pareto(p, delta, exponent);
    throw ValidationError("unknown weight law: " + law);
  }

  json to_config() const {
    json c{{"p", p}, {"law", law}, {"delta", delta}};
    if (law == "shiftexp") c["rate"] = rate;
    if (law == "pareto") c["exponent"] = exponent;
    return c;
  }
};

void add_law(CLI::App* cmd, LawOpts& l, bool full = true) {
  cmd->add_option("--p", l.p, "Open-edge probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  if (!full) return;
  cmd->add_option("--law", l.law, "Positive-part law: constant, shiftexp, pareto")
      ->capture_default_str()
      ->check(CLI::IsMember({"constant", "shiftexp", "pareto"}));
  cmd->add_option("--delta", l.delta, "Atom delta > 0")->capture_default_str();
  cmd->add_option("--rate", l.rate, "shiftexp rate")->capture_default_str();
  cmd->add_option("--exponent", l.exponent, "pareto tail exponent")
      ->capture_default_str();
}

SequenceRegime parse_case(const std::string& name) {
  if (name == "1") return SequenceRegime::Critical;
  if (name == "2a") return SequenceRegime::SubXi;
  if (name == "2b") return SequenceRegime::AtXi;
  throw ValidationError("unknown sequence case: " + name + " (use 1, 2a, 2b)");
}

std::string out_path(const CommonOpts& c, const std::string& name) {
  return (std::filesystem::path(c.out) / name).string();
}

void archive_config(const CommonOpts& c, const std::string& subcommand,
                    json params, std::uint64_t seed) {
  ensure_directory(c.out);
  json cfg{{"schema", kSchemaVersion},
           {"subcommand", subcommand},
           {"seed", seed},
           {"params", std::move(params)}};
  write_json_file(out_path(c, "config.json"), cfg);
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(const CommonOpts& c, const WedgeOpts& w, const LawOpts& l,
                 std::vector<long long> n_grid, long long replicas,
                 bool with_dual, bool with_levels) {
  const std::uint64_t seed = c.seed();
  ExperimentPlan plan;
  plan.f = w.build();
  plan.model = l.build();
  plan.n_grid = n_grid;
  plan.replicas = replicas;
  plan.seed = seed;
  plan.measure_dual = with_dual;
  plan.measure_level_total = with_levels;
  plan.workers = c.workers;

  archive_config(c, "simulate",
                 json{{"wedge", w.to_config()},
                      {"weights", l.to_config()},
                      {"n", n_grid},
                      {"replicas", replicas},
                      {"dual", with_dual},
                      {"levels", with_levels}},
                 seed);

  const ExperimentRecord rec = run(plan);

  json summary{{"schema", kSchemaVersion}};
  std::vector<std::vector<std::string>> rows;
  auto emit = [&](const char* name, const std::vector<MeasureSummary>& ms) {
    if (ms.empty()) return;
    json arr = json::array();
    for (const auto& s : ms) {
      arr.push_back(to_json(s));
      rows.push_back({format_number(static_cast<double>(s.n)), name,
                      format_number(s.mean), format_number(s.var),
                      format_number(s.ci_lo), format_number(s.ci_hi),
                      format_number(static_cast<double>(s.replicas))});
    }
    summary[name] = std::move(arr);
  };
  emit("general", rec.general);
  emit("bernoulli", rec.bernoulli);
  emit("dual", rec.dual);
  emit("level_total", rec.level_total);
  write_json_file(out_path(c, "summary.json"), summary);
  write_csv_file(out_path(c, "summary.csv"),
                 {"n", "measure", "mean", "var", "ci_low", "ci_high", "replicas"},
                 rows);

  std::ofstream lines(out_path(c, "samples.jsonl"));
  if (!lines) throw ResourceError("cannot open samples.jsonl for writing");
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    for (long long r = 0; r < replicas; ++r) {
      json row{{"n", n_grid[ni]}, {"replica", r}};
      auto put = [&](const char* name,
                     const std::vector<std::vector<double>>& samples) {
        if (!samples.empty()) row[name] = samples[ni][static_cast<std::size_t>(r)];
      };
      put("general", rec.general_samples);
      put("bernoulli", rec.bernoulli_samples);
      put("dual", rec.dual_samples);
      put("level_total", rec.level_total_samples);
      lines << row.dump() << '\n';
    }
  }
  if (!lines) throw ResourceError("write failed for samples.jsonl");

  std::cout << "simulate: " << n_grid.size() << " grid points x " << replicas
            << " replicas -> " << c.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// duality-check

int run_duality_check(const CommonOpts& c, const WedgeOpts& w, double p,
                      long long n, long long replicas) {
  const std::uint64_t seed = c.seed();
  const WedgeFunction f = w.build();
  const WedgeGraph g = build_graph(f, n);
  const WeightModel model = WeightModel::constant(p);

  archive_config(c, "duality-check",
                 json{{"wedge", w.to_config()},
                      {"p", p},
                      {"n", n},
                      {"replicas", replicas}},
                 seed);

  std::vector<char> match(static_cast<std::size_t>(replicas), 0);
  parallel_for(replicas, c.workers, [&](long long rep) {
    const WeightField field =
        sample_weight_field(model, g, seed, derive_stream(0xD7A1, static_cast<std::uint64_t>(rep)));
    PassageTimeQuery q;
    q.source = PassageTimeQuery::origin();
    q.target = PassageTimeQuery::line(n);
    q.mode = PassageTimeQuery::Mode::Bernoulli;
    const long long tb = std::llround(passage_time(g, field, q).value);
    const long long y = dual_separating_count(g, field).value;
    match[static_cast<std::size_t>(rep)] = (tb == y) ? 1 : 0;
  });

  long long exact = 0;
  json bad = json::array();
  for (long long rep = 0; rep < replicas; ++rep) {
    if (match[static_cast<std::size_t>(rep)]) {
      ++exact;
    } else if (bad.size() < 20) {
      bad.push_back(rep);
    }
  }
  write_json_file(out_path(c, "duality.json"),
                  json{{"schema", kSchemaVersion},
                       {"n", n},
                       {"replicas", replicas},
                       {"exact", exact},
                       {"first_mismatches", bad}});

  std::cout << exact << "/" << replicas << " exact\n";
  // The identity is a theorem; any mismatch is a broken invariant, not noise.
  return exact == replicas ? 0 : 3;
}

// ---------------------------------------------------------------------------
// xi

int run_xi(const CommonOpts& c, double p, long long n_max, long long samples) {
  const std::uint64_t seed = c.seed();
  archive_config(c, "xi",
                 json{{"p", p}, {"nmax", n_max}, {"samples", samples}}, seed);

  const XiEstimate est = estimate_xi(p, n_max, samples, seed, c.workers);
  write_json_file(out_path(c, "xi.json"), to_json(est));
  std::vector<std::vector<double>> rows;
  for (const auto& pt : est.points) {
    rows.push_back({static_cast<double>(pt.n), pt.value, pt.ci.lo, pt.ci.hi,
                    static_cast<double>(pt.hits),
                    static_cast<double>(pt.samples)});
  }
  write_csv_file(out_path(c, "xi_points.csv"),
                 {"k", "p_hat", "ci_low", "ci_high", "hits", "samples"}, rows);

  std::cout << "xi(p=" << p << ") = " << est.xi << " +- " << est.xi_se
            << " (fit window " << est.n_lo << ".." << est.n_hi << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// crossing

int run_crossing(const CommonOpts& c, double p, long long n, long long h,
                 long long samples) {
  const std::uint64_t seed = c.seed();
  archive_config(
      c, "crossing",
      json{{"p", p}, {"n", n}, {"h", h}, {"samples", samples}}, seed);

  const ProbabilityEstimate prob =
      estimate_rect_crossing(p, n, h, samples, seed, c.workers);
  const MeanEstimate count = estimate_mean_crossing_count(
      p, n, h, samples, derive_stream(seed, 0xC0C0), c.workers);
  write_json_file(out_path(c, "crossing.json"),
                  json{{"schema", kSchemaVersion},
                       {"n", n},
                       {"h", h},
                       {"prob", to_json(prob)},
                       {"count", to_json(count)}});

  std::cout << "crossing " << n << "x" << h << " at p=" << p
            << ": p_hat=" << prob.value << ", mean count " << count.mean
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sponge

int run_sponge(const CommonOpts& c, double p, const std::string& family_name,
               double xi_flag, bool have_xi, double scale, long long samples,
               long long max_cells) {
  const std::uint64_t seed = c.seed();
  SpongeFamily family;
  if (family_name == "shrinking") family = SpongeFamily::ShrinkingDriver;
  else if (family_name == "exploding") family = SpongeFamily::ExplodingDriver;
  else if (family_name == "constant") family = SpongeFamily::ConstantDriver;
  else throw ValidationError("unknown sponge family: " + family_name);

  double xi_hat = xi_flag;
  if (!have_xi) {
    const XiEstimate est =
        estimate_xi(p, 16, 4000, derive_stream(seed, 0x5E0), c.workers);
    xi_hat = est.xi;
  }

  archive_config(c, "sponge",
                 json{{"p", p},
                      {"family", family_name},
                      {"xi", xi_hat},
                      {"scale", scale},
                      {"samples", samples},
                      {"max_cells", max_cells}},
                 seed);

  const std::vector<long long> n_list =
      sponge_default_n_list(family, xi_hat, scale, max_cells);
  const SpongeScan scan = sponge_phase_scan(p, family, xi_hat, scale, n_list,
                                            samples, seed, max_cells, c.workers);
  write_json_file(out_path(c, "sponge.json"), to_json(scan));
  std::vector<std::vector<double>> rows;
  for (const auto& pt : scan.points)
    rows.push_back({static_cast<double>(pt.n), pt.driver, pt.prob.value});
  write_csv_file(out_path(c, "sponge.csv"), {"n", "driver", "p_hat"}, rows);

  std::cout << "sponge " << sponge_family_name(family) << " at p=" << p
            << ": " << sponge_verdict_name(scan.verdict) << " ("
            << scan.points.size() << " points)\n";
  if (c.strict && scan.verdict == SpongeVerdict::Inconclusive) return 3;
  return 0;
}

// ---------------------------------------------------------------------------
// sequence

int run_sequence(const CommonOpts& c, const WedgeOpts& w, double p, double xi,
                 const std::string& case_name, long long i_max, bool audit,
                 long long samples, long long i_lo, long long i_hi,
                 std::vector<long long> m_list) {
  const std::uint64_t seed = c.seed();
  const SequenceRegime regime = parse_case(case_name);
  const WedgeFunction f = w.build();
  const BlockSequence seq = build_sequence(f, p, xi, regime, i_max);

  archive_config(c, "sequence",
                 json{{"wedge", w.to_config()},
                      {"p", p},
                      {"xi", xi},
                      {"case", case_name},
                      {"imax", i_max},
                      {"audit", audit},
                      {"samples", samples},
                      {"ilo", i_lo},
                      {"ihi", i_hi},
                      {"m", m_list}},
                 seed);

  json out = to_json(seq);
  bool audit_ok = true;
  std::string audit_note;
  if (audit) {
    AuditOptions opt;
    opt.i_lo = i_lo;
    opt.i_hi = i_hi > 0 ? i_hi : std::min<long long>(seq.blocks(), 12);
    opt.samples = samples;
    opt.m_list = std::move(m_list);
    opt.seed = seed;
    opt.workers = c.workers;
    const AssumptionAudit a = audit_assumptions(f, seq, WeightModel::constant(p), opt);
    out["audit"] = to_json(a);
    audit_ok = a.a1_pass && a.a2_pass && a.a3_pass;
    audit_note = std::string(", audit A1 ") + (a.a1_pass ? "pass" : "FAIL") +
                 " A2 " + (a.a2_pass ? "pass" : "FAIL") + " A3 " +
                 (a.a3_pass ? "pass" : "FAIL") + " (index " +
                 std::to_string(a.audit_index) + ")";
  }
  write_json_file(out_path(c, "sequence.json"), out);

  std::cout << "sequence case " << case_name << ": " << seq.r.size()
            << " breakpoints, r_max=" << seq.r.back() << audit_note << "\n";
  if (c.strict && !audit_ok) return 3;
  return 0;
}

// ---------------------------------------------------------------------------
// martingale

int run_martingale(const CommonOpts& c, const WedgeOpts& w, const LawOpts& l,
                   double xi, const std::string& case_name, long long i0,
                   long long outer, long long inner, long long scan_cap) {
  const std::uint64_t seed = c.seed();
  if (i0 < 0) throw ValidationError("martingale: --i0 must be >= 0");
  if (outer < 1) throw ValidationError("martingale: --outer must be >= 1");
  const SequenceRegime regime = parse_case(case_name);
  const WedgeFunction f = w.build();
  // Slack past i0 so the crossing scans have room on the right.
  const long long i_max = 4 * i0 + 8;
  const BlockSequence seq = build_sequence(f, l.p, xi, regime, i_max);
  const WedgeGraph g = build_graph(f, seq.r.back());
  const WeightModel model = l.build();

  archive_config(c, "martingale",
                 json{{"wedge", w.to_config()},
                      {"weights", l.to_config()},
                      {"xi", xi},
                      {"case", case_name},
                      {"i0", i0},
                      {"outer", outer},
                      {"inner", inner},
                      {"scan_cap", scan_cap}},
                 seed);

  struct OuterRow {
    double t0 = 0.0;
    std::vector<DeltaEstimate> deltas;
  };
  std::vector<OuterRow> rowsv(static_cast<std::size_t>(outer));
  parallel_for(outer, c.workers, [&](long long rep) {
    const WeightField field = sample_weight_field(
        model, g, seed, derive_stream(0x3A17, static_cast<std::uint64_t>(rep)));
    CrossingOracle oracle(g, seq, field, scan_cap);
    OuterRow& row = rowsv[static_cast<std::size_t>(rep)];
    row.t0 = origin_to_crossing_time(oracle, i0);
    DeltaOptions opt;
    opt.inner = inner;
    opt.scan_cap = scan_cap;
    opt.seed = seed;
    opt.outer_stream = static_cast<std::uint64_t>(rep);
    for (long long i = 0; i <= i0; ++i)
      row.deltas.push_back(estimate_delta(oracle, i, i0, opt));
  });

  std::ofstream lines(out_path(c, "martingale.jsonl"));
  if (!lines) throw ResourceError("cannot open martingale.jsonl for writing");
  Moments sum_stats, t0_stats;
  std::vector<Moments> per_i(static_cast<std::size_t>(i0) + 1);
  for (long long rep = 0; rep < outer; ++rep) {
    const OuterRow& row = rowsv[static_cast<std::size_t>(rep)];
    double sum = 0.0;
    json deltas = json::array();
    for (std::size_t i = 0; i < row.deltas.size(); ++i) {
      sum += row.deltas[i].delta_hat;
      per_i[i].add(row.deltas[i].delta_hat);
      deltas.push_back(to_json(row.deltas[i]));
    }
    sum_stats.add(sum);
    t0_stats.add(row.t0);
    lines << json{{"outer", rep},
                  {"t0_gamma", row.t0},
                  {"sum_delta", sum},
                  {"deltas", deltas}}
                 .dump()
          << '\n';
  }
  if (!lines) throw ResourceError("write failed for martingale.jsonl");

  json per_i_json = json::array();
  for (long long i = 0; i <= i0; ++i) {
    const Moments& m = per_i[static_cast<std::size_t>(i)];
    per_i_json.push_back(json{{"i", i},
                              {"mean", m.mean},
                              {"second_moment", m.m2 / m.count + m.mean * m.mean},
                              {"stderr", m.stderr_mean()}});
  }
  const double mean_sum = sum_stats.mean;
  const double se_sum = sum_stats.stderr_mean();
  // Exact telescoping makes sum_delta - (t0 - mean t0) pure inner-loop noise.
  Moments resid;
  for (long long rep = 0; rep < outer; ++rep) {
    const OuterRow& row = rowsv[static_cast<std::size_t>(rep)];
    double sum = 0.0;
    for (const auto& d : row.deltas) sum += d.delta_hat;
    resid.add(sum - (row.t0 - t0_stats.mean));
  }
  write_json_file(out_path(c, "martingale_summary.json"),
                  json{{"schema", kSchemaVersion},
                       {"i0", i0},
                       {"outer", outer},
                       {"inner", inner},
                       {"mean_t0", t0_stats.mean},
                       {"mean_sum_delta", mean_sum},
                       {"se_sum_delta", se_sum},
                       {"telescoping_residual_sd", std::sqrt(resid.variance())},
                       {"per_i", per_i_json}});

  std::cout << "martingale case " << case_name << " i0=" << i0 << ": mean sum "
            << mean_sum << " +- " << se_sum << " over " << outer
            << " outer replicas\n";
  if (c.strict && std::abs(mean_sum) > 3.0 * se_sum) return 3;
  return 0;
}

// ---------------------------------------------------------------------------
// classify

int run_classify(const CommonOpts& c, double a, double b, double p, double xi,
                 double xi_ci) {
  const std::uint64_t seed = c.seed();
  const RegimeClassification cls = classify(a, b, p, xi, xi_ci);
  archive_config(
      c, "classify",
      json{{"a", a}, {"b", b}, {"p", p}, {"xi", xi}, {"xi_ci", xi_ci}}, seed);
  write_json_file(out_path(c, "classify.json"), to_json(cls));
  std::cout << json{{"regime", regime_name(cls.regime)}}.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// clt

int run_clt(const CommonOpts& c, const WedgeOpts& w, const LawOpts& l,
            long long n, long long replicas) {
  const std::uint64_t seed = c.seed();
  ExperimentPlan plan;
  plan.f = w.build();
  plan.model = l.build();
  plan.n_grid = {n};
  plan.replicas = replicas;
  plan.seed = seed;
  plan.workers = c.workers;

  archive_config(c, "clt",
                 json{{"wedge", w.to_config()},
                      {"weights", l.to_config()},
                      {"n", n},
                      {"replicas", replicas}},
                 seed);

  const ExperimentRecord rec = run(plan);
  const KsResult ks = clt_test(rec, n);
  const MeasureSummary& s = rec.general.front();
  write_json_file(out_path(c, "clt.json"),
                  json{{"schema", kSchemaVersion},
                       {"n", n},
                       {"replicas", replicas},
                       {"summary", to_json(s)},
                       {"ks", to_json(ks)}});

  std::cout << "clt n=" << n << ": KS distance " << ks.distance << ", p = "
            << ks.p_value << "\n";
  if (c.strict && ks.p_value < 0.01) return 3;
  return 0;
}

// ---------------------------------------------------------------------------
// report

int run_report(const CommonOpts& c, const std::string& dir_flag) {
  const std::string dir = dir_flag.empty() ? c.out : dir_flag;
  std::vector<std::string> sections;
  std::vector<std::string> warnings;
  std::string md;
  md += "# wedge-fpp run report\n\n";

  auto load = [&](const std::string& name, json& out) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    if (!std::filesystem::exists(path)) return false;
    try {
      out = read_json_file(path);
      return true;
    } catch (const std::exception& e) {
      warnings.push_back(name + ": " + e.what());
      return false;
    }
  };

  json cfg;
  if (load("config.json", cfg)) {
    sections.push_back("config");
    md += "## Configuration\n\n```\n" + cfg.dump(2) + "\n```\n\n";
  } else {
    warnings.push_back("config.json missing: partial report");
  }

  json summary;
  if (load("summary.json", summary)) {
    sections.push_back("growth");
    md += "## Passage-time summaries\n\n";
    md += "| n | measure | mean | var | var/mean |\n";
    md += "|---|---------|------|-----|----------|\n";
    std::vector<std::vector<double>> et_rows;
    for (const auto& name : {"general", "bernoulli", "dual", "level_total"}) {
      if (!summary.contains(name)) continue;
      for (const auto& row : summary[name]) {
        const double n = row.value("n", 0.0);
        const double mean = row.value("mean", 0.0);
        const double var = row.value("var", 0.0);
        md += "| " + format_number(n) + " | " + name + " | " +
              format_number(mean) + " | " + format_number(var) + " | " +
              format_number(mean > 0 ? var / mean : 0.0) + " |\n";
        if (std::string(name) == "general" ||
            (std::string(name) == "bernoulli" && !summary.contains("general")))
          et_rows.push_back({n, mean, var});
      }
    }
    md += "\n";
    if (!et_rows.empty()) {
      write_csv_file((std::filesystem::path(dir) / "et_vs_n.csv").string(),
                     {"n", "mean_t", "var_t"}, et_rows);
      md += "Plot data: `et_vs_n.csv`\n\n";
    }

    // Variance against the block count iota(n) when a sequence is on file.
    json seqj;
    if (load("sequence.json", seqj) && seqj.contains("r")) {
      BlockSequence seq;
      seq.r = seqj["r"].get<std::vector<long long>>();
      seq.p = seqj.value("p", 0.5);
      seq.xi_hat = seqj.value("xi_hat", 0.0);
      seq.j0 = seqj.value("j0", 0ll);
      std::vector<std::vector<double>> vi_rows;
      for (const auto& row : et_rows) {
        const long long n = static_cast<long long>(row[0]);
        if (n > seq.r.back() || seq.r.size() < 3) continue;
        vi_rows.push_back(
            {static_cast<double>(n), static_cast<double>(iota(seq, n)), row[2]});
      }
      if (!vi_rows.empty()) {
        write_csv_file((std::filesystem::path(dir) / "var_vs_iota.csv").string(),
                       {"n", "iota", "var_t"}, vi_rows);
        md += "Plot data: `var_vs_iota.csv`\n\n";
      }
    }
  }

  json classifyj;
  if (load("classify.json", classifyj)) {
    sections.push_back("regime");
    md += "## Growth regime\n\n";
    md += "Regime: **" + classifyj.value("regime", std::string("?")) +
          "**, rate " + classifyj.value("rate_formula", std::string("?")) +
          ", bands " + classifyj.value("prefactor_lower", std::string("?")) +
          " .. " + classifyj.value("prefactor_upper", std::string("?")) + "\n\n";
  }

  json xij;
  if (load("xi.json", xij)) {
    sections.push_back("xi");
    md += "## Decay length\n\n";
    md += "xi_hat = " + format_number(xij.value("xi", 0.0)) + " +- " +
          format_number(xij.value("xi_se", 0.0)) + " at p = " +
          format_number(xij.value("p", 0.0)) + "\n\n";
  }

  json spongej;
  if (load("sponge.json", spongej)) {
    sections.push_back("sponge");
    md += "## Sponge scan\n\n";
    md += "Family " + spongej.value("family", std::string("?")) +
          ", verdict **" + spongej.value("verdict", std::string("?")) + "**\n\n";
    std::vector<std::vector<double>> rows;
    if (spongej.contains("points")) {
      for (const auto& pt : spongej["points"]) {
        rows.push_back({pt.value("n", 0.0), pt.value("driver", 0.0),
                        pt.contains("prob") ? pt["prob"].value("value", 0.0)
                                            : 0.0});
      }
    }
    if (!rows.empty()) {
      write_csv_file(
          (std::filesystem::path(dir) / "prob_vs_driver.csv").string(),
          {"n", "driver", "p_hat"}, rows);
      md += "Plot data: `prob_vs_driver.csv`\n\n";
    }
  }

  json cltj;
  if (load("clt.json", cltj)) {
    sections.push_back("clt");
    md += "## Normality\n\n";
    const json ks = cltj.value("ks", json::object());
    md += "KS distance " + format_number(ks.value("distance", 0.0)) +
          ", p-value " + format_number(ks.value("p_value", 0.0)) + " at n = " +
          format_number(cltj.value("n", 0.0)) + "\n\n";
  }

  json seq_only;
  if (load("sequence.json", seq_only) && seq_only.contains("audit")) {
    sections.push_back("audit");
    const json a = seq_only["audit"];
    md += "## Assumption audit\n\n";
    md += std::string("A1 ") + (a.value("a1_pass", false) ? "pass" : "fail") +
          ", A2 " + (a.value("a2_pass", false) ? "pass" : "fail") + ", A3 " +
          (a.value("a3_pass", false) ? "pass" : "fail") + ", audit index " +
          std::to_string(a.value("audit_index", -1ll)) + "\n\n";
  }

  json duals;
  if (load("duality.json", duals)) {
    sections.push_back("duality");
    md += "## Duality check\n\n";
    md += format_number(duals.value("exact", 0.0)) + " of " +
          format_number(duals.value("replicas", 0.0)) +
          " fields matched exactly\n\n";
  }

  json mart;
  if (load("martingale_summary.json", mart)) {
    sections.push_back("martingale");
    md += "## Martingale decomposition\n\n";
    md += "mean sum of increments " +
          format_number(mart.value("mean_sum_delta", 0.0)) + " +- " +
          format_number(mart.value("se_sum_delta", 0.0)) + " over " +
          format_number(mart.value("outer", 0.0)) + " outer replicas\n\n";
  }

  if (sections.empty())
    md += "No run artifacts found in `" + dir + "`.\n\n";
  if (!warnings.empty()) {
    md += "## Warnings\n\n";
    for (const auto& wmsg : warnings) md += "- " + wmsg + "\n";
    md += "\n";
  }

  ensure_directory(dir);
  const std::string md_path = (std::filesystem::path(dir) / "report.md").string();
  std::ofstream out(md_path);
  if (!out) throw ResourceError("cannot open " + md_path + " for writing");
  out << md;
  if (!out) throw ResourceError("write failed for " + md_path);

  std::cout << "report: " << sections.size() << " sections, "
            << warnings.size() << " warnings -> " << md_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage percolation on wedge subgraphs of Z^2"};
  app.require_subcommand(1);

  // simulate
  CommonOpts sim_c;
  WedgeOpts sim_w;
  LawOpts sim_l;
  std::vector<long long> sim_n;
  long long sim_replicas = 100;
  bool sim_dual = false, sim_levels = false;
  auto* sim = app.add_subcommand(
      "simulate", "Replicated passage-time measurements over an n-grid");
  add_common(sim, sim_c);
  add_wedge(sim, sim_w);
  add_law(sim, sim_l);
  sim->add_option("--n", sim_n, "Grid of target columns (strictly increasing)")
      ->required();
  sim->add_option("--replicas", sim_replicas, "Replicas per grid point")
      ->capture_default_str();
  sim->add_flag("--dual", sim_dual, "Also record the dual separating count");
  sim->add_flag("--levels", sim_levels, "Also record per-level dual totals");

  // duality-check
  CommonOpts dua_c;
  WedgeOpts dua_w;
  double dua_p = 0.5;
  long long dua_n = 40, dua_replicas = 200;
  auto* dua = app.add_subcommand(
      "duality-check",
      "Verify passage time equals the dual separating count on sampled fields");
  add_common(dua, dua_c);
  add_wedge(dua, dua_w, true);
  dua->add_option("--p", dua_p, "Open-edge probability")->required();
  dua->add_option("--n", dua_n, "Target column")->capture_default_str();
  dua->add_option("--replicas", dua_replicas, "Sampled fields")
      ->capture_default_str();

  // xi
  CommonOpts xi_c;
  double xi_p = 0.3;
  long long xi_nmax = 28, xi_samples = 4000;
  auto* xic = app.add_subcommand(
      "xi", "Estimate the subcritical connectivity decay length");
  add_common(xic, xi_c);
  xic->add_option("--p", xi_p, "Open-edge probability (subcritical)")
      ->required();
  xic->add_option("--nmax", xi_nmax, "Largest distance probed")
      ->capture_default_str();
  xic->add_option("--samples", xi_samples, "Fields per distance")
      ->capture_default_str();

  // crossing
  CommonOpts cr_c;
  double cr_p = 0.5;
  long long cr_n = 40, cr_h = 10, cr_samples = 2000;
  auto* crc = app.add_subcommand(
      "crossing", "Rectangle crossing probability and mean crossing count");
  add_common(crc, cr_c);
  crc->add_option("--p", cr_p, "Open-edge probability")->required();
  crc->add_option("--n", cr_n, "Rectangle width")->capture_default_str();
  crc->add_option("--height", cr_h, "Rectangle height")->capture_default_str();
  crc->add_option("--samples", cr_samples, "Sampled fields")
      ->capture_default_str();

  // sponge
  CommonOpts sp_c;
  double sp_p = 0.35, sp_xi = 0.0, sp_scale = 1.0;
  std::string sp_family;
  long long sp_samples = 800, sp_cells = 50000000;
  auto* spc = app.add_subcommand(
      "sponge", "Crossing-probability scan with height driven by the decay length");
  add_common(spc, sp_c);
  spc->add_option("--p", sp_p, "Open-edge probability (subcritical)")
      ->capture_default_str();
  spc->add_option("--family", sp_family,
                  "Height family: shrinking, exploding, constant")
      ->required()
      ->check(CLI::IsMember({"shrinking", "exploding", "constant"}));
  auto* sp_xi_opt =
      spc->add_option("--xi", sp_xi, "Decay length (measured when omitted)");
  spc->add_option("--scale", sp_scale, "Constant-family height scale")
      ->capture_default_str();
  spc->add_option("--samples", sp_samples, "Fields per point")
      ->capture_default_str();
  spc->add_option("--max-cells", sp_cells, "Rectangle cell budget")
      ->capture_default_str();

  // sequence
  CommonOpts se_c;
  WedgeOpts se_w;
  double se_p = 0.5, se_xi = 0.0;
  std::string se_case = "1";
  long long se_imax = 40, se_samples = 200, se_ilo = 0, se_ihi = 0;
  std::vector<long long> se_m = {1, 2};
  bool se_audit = false;
  auto* sec = app.add_subcommand(
      "sequence", "Build the block sequence for a regime, optionally audited");
  add_common(sec, se_c);
  add_wedge(sec, se_w, true);
  sec->add_option("--p", se_p, "Open-edge probability")->required();
  sec->add_option("--xi", se_xi, "Decay length at 1-p (cases 2a, 2b)")
      ->capture_default_str();
  sec->add_option("--case", se_case, "Sequence case: 1, 2a, 2b")
      ->capture_default_str();
  sec->add_option("--imax", se_imax, "Largest block index")
      ->capture_default_str();
  sec->add_flag("--audit", se_audit, "Run the A1-A3 assumption audit");
  sec->add_option("--samples", se_samples, "Audit fields per block")
      ->capture_default_str();
  sec->add_option("--ilo", se_ilo, "First audited block")->capture_default_str();
  sec->add_option("--ihi", se_ihi, "Last audited block (0 = auto)")
      ->capture_default_str();
  sec->add_option("--m", se_m, "Tail thresholds for the A3 audit")
      ->capture_default_str();

  // martingale
  CommonOpts ma_c;
  WedgeOpts ma_w;
  LawOpts ma_l;
  double ma_xi = 0.0;
  std::string ma_case = "1";
  long long ma_i0 = 8, ma_outer = 200, ma_inner = 64, ma_scan = 50;
  auto* mac = app.add_subcommand(
      "martingale",
      "Estimate the telescoped increments of the origin-to-crossing time");
  add_common(mac, ma_c);
  add_wedge(mac, ma_w, true);
  add_law(mac, ma_l);
  mac->add_option("--xi", ma_xi, "Decay length (cases 2a, 2b)")
      ->capture_default_str();
  mac->add_option("--case", ma_case, "Sequence case: 1, 2a, 2b")
      ->capture_default_str();
  mac->add_option("--i0", ma_i0, "Telescoping depth")->capture_default_str();
  mac->add_option("--outer", ma_outer, "Outer replicas")->capture_default_str();
  mac->add_option("--inner", ma_inner, "Fresh fields per outer replica")
      ->capture_default_str();
  mac->add_option("--scan-cap", ma_scan, "Crossing scan cap")
      ->capture_default_str();

  // classify
  CommonOpts cl_c;
  double cl_a = 1.0, cl_b = 0.0, cl_p = 0.5, cl_xi = 0.0, cl_ci = 0.0;
  auto* clc = app.add_subcommand(
      "classify", "Growth regime for wedge coefficients and edge probability");
  add_common(clc, cl_c);
  clc->add_option("--a", cl_a, "Wedge coefficient a")->required();
  clc->add_option("--b", cl_b, "Wedge coefficient b")->capture_default_str();
  clc->add_option("--p", cl_p, "Open-edge probability")->required();
  clc->add_option("--xi", cl_xi, "Decay length at 1-p (needed for p > 1/2)")
      ->capture_default_str();
  clc->add_option("--xi-ci", cl_ci, "Half-width of the decay-length CI")
      ->capture_default_str();

  // clt
  CommonOpts ct_c;
  WedgeOpts ct_w;
  LawOpts ct_l;
  long long ct_n = 256, ct_replicas = 2000;
  auto* ctc = app.add_subcommand(
      "clt", "Normality of the standardized passage time at one n");
  add_common(ctc, ct_c);
  add_wedge(ctc, ct_w);
  add_law(ctc, ct_l);
  ctc->add_option("--n", ct_n, "Target column")->capture_default_str();
  ctc->add_option("--replicas", ct_replicas, "Replicas (>= 1000)")
      ->capture_default_str();

  // report
  CommonOpts re_c;
  std::string re_dir;
  auto* rec = app.add_subcommand(
      "report", "Summarize run artifacts into markdown and plot CSVs");
  add_common(rec, re_c);
  rec->add_option("--dir", re_dir, "Run directory (default: --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed())
      return run_simulate(sim_c, sim_w, sim_l, sim_n, sim_replicas, sim_dual,
                          sim_levels);
    if (dua->parsed())
      return run_duality_check(dua_c, dua_w, dua_p, dua_n, dua_replicas);
    if (xic->parsed()) return run_xi(xi_c, xi_p, xi_nmax, xi_samples);
    if (crc->parsed()) return run_crossing(cr_c, cr_p, cr_n, cr_h, cr_samples);
    if (spc->parsed())
      return run_sponge(sp_c, sp_p, sp_family, sp_xi, sp_xi_opt->count() > 0,
                        sp_scale, sp_samples, sp_cells);
    if (sec->parsed())
      return run_sequence(se_c, se_w, se_p, se_xi, se_case, se_imax, se_audit,
                          se_samples, se_ilo, se_ihi, se_m);
    if (mac->parsed())
      return run_martingale(ma_c, ma_w, ma_l, ma_xi, ma_case, ma_i0, ma_outer,
                            ma_inner, ma_scan);
    if (clc->parsed()) return run_classify(cl_c, cl_a, cl_b, cl_p, cl_xi, cl_ci);
    if (ctc->parsed()) return run_clt(ct_c, ct_w, ct_l, ct_n, ct_replicas);
    if (rec->parsed()) return run_report(re_c, re_dir);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StatisticalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
