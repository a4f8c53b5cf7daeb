#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wedge_fpp/harness.hpp"
#include "wedge_fpp/martingale.hpp"
#include "wedge_fpp/perc_stats.hpp"
#include "wedge_fpp/regimes.hpp"
#include "wedge_fpp/sequences.hpp"

namespace wedge {

// Every emitted JSON object carries {"schema": kSchema}; every CSV starts
// with a "# wedge-fpp/1" line. Outputs contain no timestamps and no worker
// counts, so a rerun with the same config is byte-identical.
inline constexpr const char* kSchemaVersion = "wedge-fpp/1";

// Seed precedence: explicit flag, then the WEDGE_FPP_SEED environment
// variable, then 12345.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

void ensure_directory(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& value);
nlohmann::json read_json_file(const std::string& path);

void write_csv_file(const std::string& path,
                    const std::vector<std::string>& columns,
                    const std::vector<std::vector<double>>& rows);
void write_csv_file(const std::string& path,
                    const std::vector<std::string>& columns,
                    const std::vector<std::vector<std::string>>& rows);

// Shortest round-trip decimal form of a double, for CSV cells.
std::string format_number(double x);

nlohmann::json to_json(const Interval& v);
nlohmann::json to_json(const ProbabilityEstimate& v);
nlohmann::json to_json(const MeanEstimate& v);
nlohmann::json to_json(const XiEstimate& v);
nlohmann::json to_json(const SpongeScan& v);
nlohmann::json to_json(const MeasureSummary& v);
nlohmann::json to_json(const RegimeClassification& v);
nlohmann::json to_json(const FitReport& v);
nlohmann::json to_json(const BlockSequence& v);
nlohmann::json to_json(const AssumptionAudit& v);
nlohmann::json to_json(const DeltaEstimate& v);
nlohmann::json to_json(const KsResult& v);
nlohmann::json to_json(const RatioBandVerdict& v);

}  // namespace wedge
