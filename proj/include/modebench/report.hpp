// Copyright 2026 The modebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef MODEBENCH_REPORT_HPP
#define MODEBENCH_REPORT_HPP

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "modebench/harness.hpp"

namespace modebench {

enum class HeatmapMetric { kMeanAbsError, kStd };

std::string_view metric_name(HeatmapMetric metric);

/// Fixed colour range of every heatmap.
inline constexpr double kHeatmapMin = 0.0;
inline constexpr double kHeatmapMax = 0.35;

/// Real with 10 significant digits, as written to every CSV.
std::string format_real(double v);
/// Shortest round-trip text of `a`, used in record file names.
std::string format_key(double a);

nlohmann::ordered_json record_to_json(const EstimateRecord& record);
EstimateRecord record_from_json(const nlohmann::json& j);

/// records/<sampler>/<a>_<d>.jsonl relative to `dir`.
std::filesystem::path record_path(const std::filesystem::path& dir, const std::string& sampler, double a, int d);
/// One JSON object per line; all records must share the same cell.
void write_cell_records(const std::filesystem::path& dir, const std::vector<EstimateRecord>& records);
std::vector<EstimateRecord> read_records(const std::filesystem::path& dir);

void write_oracles(const std::filesystem::path& file, const OracleTable& oracles, std::int64_t n_oracle,
                   std::uint64_t master_seed);
struct OracleFile {
  OracleTable table;
  std::int64_t n_samples = 0;
  std::uint64_t master_seed = 0;
};

/// Throws ValidationError when the file is missing or malformed.
OracleFile read_oracle_file(const std::filesystem::path& file);
OracleTable read_oracles(const std::filesystem::path& file);

std::string summary_csv(const std::vector<CellSummary>& summary);
std::vector<CellSummary> parse_summary_csv(const std::string& text);
nlohmann::ordered_json summary_json(const std::vector<CellSummary>& summary);

/// a-by-d matrix of one sampler's metric; the header row lists d, blank
/// entries mark missing cells. Axes are the union over the whole summary.
std::string heatmap_csv(const std::vector<CellSummary>& summary, const std::string& sampler,
                        HeatmapMetric metric);
std::string heatmap_svg(const std::vector<CellSummary>& summary, const std::string& sampler,
                        HeatmapMetric metric);

enum class ReportFormat { kCsv, kJson, kSvg };
ReportFormat parse_report_format(std::string_view name);

/// Reads oracle.json and the record store under `dir`, aggregates and writes
/// the requested outputs into `dir`. Returns the written files.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, ReportFormat format,
                                                std::vector<std::string>* warnings = nullptr);

void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace modebench

#endif  // MODEBENCH_REPORT_HPP
