#pragma once
// series.csv columns: t,I1,I2,H2,Hs_target,weighted_r,lambda1,...,lambda5,
// numbers printed with %.17g; lambda5 is "nan" for k = 2.
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "kdv5/diagnostics.hpp"
#include "kdv5/scenarios.hpp"

namespace kdv5 {

inline constexpr const char* kSeriesHeader = "t,I1,I2,H2,Hs_target,weighted_r,lambda1,lambda2,lambda3,lambda4,lambda5";

std::string format_number(double v);
void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows);
std::string series_csv(const std::vector<SeriesRow>& rows);

// Full resolved configuration, assertions with margins, metrics, seed.
std::string summary_json(const ScenarioResult& result);
// Minimal summary for a run that stopped with an error.
std::string failure_json(const ScenarioConfig& cfg, const std::string& error);

// Writes series.csv, any extra series and summary.json into dir, each via a
// temporary file and rename.
void emit(const ScenarioResult& result, const std::filesystem::path& dir);
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace kdv5
