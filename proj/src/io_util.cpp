#include "wedge_fpp/io_util.hpp"

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "wedge_fpp/errors.hpp"

namespace wedge {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("WEDGE_FPP_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0')
      throw ValidationError("WEDGE_FPP_SEED is not an unsigned integer");
    return static_cast<std::uint64_t>(v);
  }
  return 12345;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw ResourceError("cannot create directory " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot open " + path + " for writing");
  out << value.dump(2) << '\n';
  if (!out) throw ResourceError("write failed for " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

void write_csv_file(const std::string& path,
                    const std::vector<std::string>& columns,
                    const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot open " + path + " for writing");
  out << "# " << kSchemaVersion << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ValidationError("csv row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c)
      out << format_number(row[c]) << (c + 1 < row.size() ? ',' : '\n');
  }
  if (!out) throw ResourceError("write failed for " + path);
}

void write_csv_file(const std::string& path,
                    const std::vector<std::string>& columns,
                    const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot open " + path + " for writing");
  out << "# " << kSchemaVersion << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ValidationError("csv row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c)
      out << row[c] << (c + 1 < row.size() ? ',' : '\n');
  }
  if (!out) throw ResourceError("write failed for " + path);
}

std::string format_number(double x) {
  // nlohmann emits the shortest decimal string that round-trips the double,
  // which keeps regenerated files byte-identical across runs.
  return nlohmann::json(x).dump();
}

nlohmann::json to_json(const Interval& v) {
  return {{"lo", v.lo}, {"hi", v.hi}};
}

nlohmann::json to_json(const ProbabilityEstimate& v) {
  return {{"n", v.n},        {"samples", v.samples}, {"hits", v.hits},
          {"value", v.value}, {"ci", to_json(v.ci)},  {"rare", v.rare}};
}

nlohmann::json to_json(const MeanEstimate& v) {
  return {{"n", v.n}, {"samples", v.samples}, {"mean", v.mean}, {"se", v.se}};
}

nlohmann::json to_json(const XiEstimate& v) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : v.points) pts.push_back(to_json(p));
  return {{"p", v.p},
          {"samples", v.samples},
          {"n_lo", v.n_lo},
          {"n_hi", v.n_hi},
          {"slope", v.slope},
          {"slope_se", v.slope_se},
          {"xi", v.xi},
          {"xi_se", v.xi_se},
          {"points", pts}};
}

nlohmann::json to_json(const SpongeScan& v) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : v.points)
    pts.push_back({{"n", p.n},
                   {"h", p.h},
                   {"driver", p.driver},
                   {"prob", to_json(p.prob)}});
  return {{"family", sponge_family_name(v.family)},
          {"xi_hat", v.xi_hat},
          {"scale", v.scale},
          {"verdict", sponge_verdict_name(v.verdict)},
          {"points", pts}};
}

nlohmann::json to_json(const MeasureSummary& v) {
  return {{"n", v.n},       {"replicas", v.replicas}, {"mean", v.mean},
          {"var", v.var},   {"skew", v.skew},         {"se", v.se},
          {"ci_lo", v.ci_lo}, {"ci_hi", v.ci_hi}};
}

nlohmann::json to_json(const RegimeClassification& v) {
  return {{"a", v.a},
          {"b", v.b},
          {"p", v.p},
          {"xi_hat", v.xi_hat},
          {"xi_ci", v.xi_ci},
          {"regime", regime_name(v.regime)},
          {"equality_ambiguous", v.equality_ambiguous},
          {"near_critical", v.near_critical},
          {"rate", v.rate_formula},
          {"prefactor_lower", v.prefactor_lower},
          {"prefactor_upper", v.prefactor_upper}};
}

nlohmann::json to_json(const FitReport& v) {
  return {{"n", v.n},
          {"ratio", v.ratio},
          {"ratio_mean", v.ratio_mean},
          {"band_lo", v.band_lo},
          {"band_hi", v.band_hi},
          {"trend_slope", v.trend_slope},
          {"trend_se", v.trend_se},
          {"trend_flat", v.trend_flat},
          {"powerlike_slope", v.powerlike_slope},
          {"powerlike_se", v.powerlike_se},
          {"powerlike_target", v.powerlike_target},
          {"drift_flag", v.drift_flag}};
}

namespace {

const char* regime_tag(SequenceRegime r) {
  switch (r) {
    case SequenceRegime::Critical: return "critical";
    case SequenceRegime::SubXi: return "sub_xi";
    case SequenceRegime::AtXi: return "at_xi";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const BlockSequence& v) {
  return {{"r", v.r},
          {"regime", regime_tag(v.regime)},
          {"p", v.p},
          {"xi_hat", v.xi_hat},
          {"j0", v.j0}};
}

nlohmann::json to_json(const AssumptionAudit& v) {
  nlohmann::json a1 = nlohmann::json::array();
  for (const auto& e : v.a1) a1.push_back(to_json(e));
  nlohmann::json a2 = nlohmann::json::array();
  for (const auto& e : v.a2) a2.push_back(to_json(e));
  nlohmann::json a3 = nlohmann::json::array();
  for (const auto& row : v.a3) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    a3.push_back(r);
  }
  return {{"i_values", v.i_values},
          {"a1", a1},
          {"a2", a2},
          {"a3", a3},
          {"m_list", v.m_list},
          {"a1_threshold", v.a1_threshold},
          {"audit_index", v.audit_index},
          {"a2_form_constant", v.a2_form_constant},
          {"a1_pass", v.a1_pass},
          {"a2_pass", v.a2_pass},
          {"a3_pass", v.a3_pass}};
}

nlohmann::json to_json(const DeltaEstimate& v) {
  const char* kind = v.kind == DeltaCase::Coupled
                         ? "coupled"
                         : v.kind == DeltaCase::Boundary ? "boundary"
                                                         : "quiet";
  return {{"i", v.i},
          {"i0", v.i0},
          {"m_i", v.m_i},
          {"m_prev", v.m_prev},
          {"on_event", v.on_event},
          {"on_prev_event", v.on_prev_event},
          {"t_pair", v.t_pair},
          {"inner_mean_target", v.inner_mean_target},
          {"inner_mean_source", v.inner_mean_source},
          {"inner_se", v.inner_se},
          {"inner_kept", v.inner_kept},
          {"inner_discarded", v.inner_discarded},
          {"case", kind},
          {"delta_hat", v.delta_hat}};
}

nlohmann::json to_json(const KsResult& v) {
  return {{"distance", v.distance}, {"p_value", v.p_value}};
}

nlohmann::json to_json(const RatioBandVerdict& v) {
  return {{"n", v.n},
          {"ratio", v.ratio},
          {"band", v.band},
          {"band_limit", v.band_limit},
          {"trend_slope", v.trend_slope},
          {"trend_se", v.trend_se},
          {"band_ok", v.band_ok},
          {"trend_ok", v.trend_ok},
          {"skipped", v.skipped},
          {"pass", v.pass}};
}

}  // namespace wedge
