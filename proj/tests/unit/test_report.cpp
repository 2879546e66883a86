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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "modebench/errors.hpp"
#include "modebench/report.hpp"

namespace modebench {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("modebench_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CellSummary cell(const std::string& sampler, double a, int d, double err, bool collapsed) {
  CellSummary s;
  s.sampler = sampler;
  s.a = a;
  s.d = d;
  s.n_reps = 16;
  s.mean_abs_error = err;
  s.std = err / 3.0;
  s.systematic_collapse = collapsed;
  s.mean_wall_clock_s = 0.125;
  s.oracle_w1 = 0.6654321;
  s.oracle_stderr = 1.49e-4;
  return s;
}

TEST(SummaryCsv, OneCell) {
  const std::string csv = summary_csv({cell("smc", 2.875, 8, 0.1, false)});
  std::istringstream in(csv);
  std::string header;
  std::string row;
  std::string extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(header, "sampler,a,d,n_reps,mean_abs_error,std,systematic_collapse,mean_wall_clock_s,oracle_w1,oracle_stderr");
  EXPECT_EQ(row.substr(0, 17), "smc,2.875,8,16,0.");
  EXPECT_NE(row.find(",false,"), std::string::npos);
  EXPECT_NE(summary_csv({cell("mala", 1, 4, 0.3, true)}).find(",true,"), std::string::npos);
}

TEST(SummaryCsv, RoundTrip) {
  const std::vector<CellSummary> in{cell("mala", 0.5, 4, 0.0123456789012345, true),
                                    cell("is", 10.0, 64, 1.0 / 3.0, false)};
  const std::vector<CellSummary> out = parse_summary_csv(summary_csv(in));
  ASSERT_EQ(out.size(), 2U);
  // rows come back sorted by sampler
  EXPECT_EQ(out[0].sampler, "is");
  EXPECT_EQ(out[1].sampler, "mala");
  EXPECT_EQ(format_real(out[0].mean_abs_error), format_real(in[1].mean_abs_error));
  EXPECT_EQ(format_real(out[1].mean_abs_error), format_real(in[0].mean_abs_error));
  EXPECT_EQ(out[1].systematic_collapse, true);
  EXPECT_EQ(out[0].d, 64);
  EXPECT_EQ(summary_csv(out), summary_csv(in));
  EXPECT_THROW(parse_summary_csv("bad header\n"), ValidationError);
}

TEST(Heatmap, SingleCell) {
  const std::vector<CellSummary> s{cell("re", 2.875, 8, 0.0625, false)};
  EXPECT_EQ(heatmap_csv(s, "re", HeatmapMetric::kMeanAbsError), "a\\d,8\n2.875,0.0625\n");
  EXPECT_EQ(heatmap_csv(s, "re", HeatmapMetric::kStd), "a\\d,8\n2.875," + format_real(0.0625 / 3.0) + "\n");
  const std::string svg = heatmap_svg(s, "re", HeatmapMetric::kMeanAbsError);
  EXPECT_EQ(svg.find("class=\"collapsed\""), std::string::npos);
  EXPECT_NE(svg.find("0.062"), std::string::npos);
}

TEST(Heatmap, CollapsedCellHatched) {
  const std::vector<CellSummary> s{cell("mala", 5.25, 16, 1.0 / 3.0, true), cell("mala", 0.5, 16, 0.02, false)};
  const std::string svg = heatmap_svg(s, "mala", HeatmapMetric::kMeanAbsError);
  std::size_t count = 0;
  for (std::size_t pos = svg.find("class=\"collapsed\""); pos != std::string::npos;
       pos = svg.find("class=\"collapsed\"", pos + 1)) {
    ++count;
  }
  EXPECT_EQ(count, 1U);
  const std::string csv = heatmap_csv(s, "mala", HeatmapMetric::kMeanAbsError);
  EXPECT_NE(csv.find("5.25," + format_real(1.0 / 3.0)), std::string::npos);
}

TEST(Heatmap, MissingCellsBlank) {
  const std::vector<CellSummary> s{cell("vi", 0.5, 4, 0.1, false), cell("vi", 10.0, 8, 0.2, false),
                                   cell("is", 5.25, 16, 0.2, false)};
  EXPECT_EQ(heatmap_csv(s, "vi", HeatmapMetric::kMeanAbsError), "a\\d,4,8,16\n0.5,0.1,,\n5.25,,,\n10,,0.2,\n");
}

TEST(Heatmap, MatchesSummaryValues) {
  const std::vector<CellSummary> s{cell("smc", 0.5, 4, 0.0370123, false)};
  const auto parsed = parse_summary_csv(summary_csv(s));
  EXPECT_EQ(heatmap_csv(s, "smc", HeatmapMetric::kMeanAbsError),
            "a\\d,4\n0.5," + format_real(parsed[0].mean_abs_error) + "\n");
}

TEST(Records, JsonRoundTrip) {
  EstimateRecord r;
  r.sampler = "slips";
  r.a = 2.875;
  r.d = 8;
  r.rep = 3;
  r.w1_hat = 0.640625;
  r.collapsed = false;
  r.wall_clock_s = 1.5;
  r.seed_path = {1, 5, 77, 8, 3};
  r.diagnostics["t0"] = 0.1;
  const nlohmann::ordered_json j = record_to_json(r);
  EXPECT_EQ(j.begin().key(), "sampler");
  EXPECT_EQ((--j.end()).key(), "wall_clock_s");
  const EstimateRecord back = record_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.sampler, r.sampler);
  EXPECT_EQ(back.a, r.a);
  EXPECT_EQ(back.w1_hat, r.w1_hat);
  EXPECT_EQ(back.seed_path, r.seed_path);
  EXPECT_EQ(record_to_json(back).dump(), j.dump());

  r.w1_hat.reset();
  r.error = "failed";
  EXPECT_TRUE(record_to_json(r)["w1_hat"].is_null());
  EXPECT_FALSE(record_from_json(nlohmann::json::parse(record_to_json(r).dump())).w1_hat.has_value());
}

TEST(Records, DirectoryRoundTrip) {
  const fs::path dir = scratch("records");
  std::vector<EstimateRecord> recs;
  for (int i = 0; i < 3; ++i) {
    EstimateRecord r;
    r.sampler = "is";
    r.a = 0.5;
    r.d = 4;
    r.rep = i;
    r.w1_hat = 0.25 * i;
    recs.push_back(r);
  }
  write_cell_records(dir, recs);
  EXPECT_TRUE(fs::exists(record_path(dir, "is", 0.5, 4)));
  const auto back = read_records(dir);
  ASSERT_EQ(back.size(), 3U);
  EXPECT_EQ(back[2].w1_hat, 0.5);
  fs::remove_all(dir);
}

TEST(Oracles, FileRoundTrip) {
  const fs::path dir = scratch("oracles");
  const OracleTable t{{{0.5, 4}, {0.6123, 1e-4}}, {{10.0, 64}, {2.0 / 3.0, 1.5e-4}}};
  write_oracles(dir / "oracle.json", t, 1000000, 42);
  const OracleFile f = read_oracle_file(dir / "oracle.json");
  EXPECT_EQ(f.n_samples, 1000000);
  EXPECT_EQ(f.master_seed, 42U);
  ASSERT_EQ(f.table.size(), 2U);
  EXPECT_EQ(f.table.at({10.0, 64}).w1, 2.0 / 3.0);
  EXPECT_THROW(read_oracles(dir / "missing.json"), ValidationError);
  fs::remove_all(dir);
}

TEST(WriteReport, AllFormats) {
  const fs::path dir = scratch("report");
  const OracleTable t{{{0.5, 4}, {0.6, 1e-4}}};
  write_oracles(dir / "oracle.json", t, 100000, 1);
  std::vector<EstimateRecord> recs;
  for (int i = 0; i < 2; ++i) {
    EstimateRecord r;
    r.sampler = "vi";
    r.a = 0.5;
    r.d = 4;
    r.rep = i;
    r.w1_hat = 1.0;
    r.collapsed = true;
    recs.push_back(r);
  }
  write_cell_records(dir, recs);
  EXPECT_FALSE(write_report(dir, ReportFormat::kCsv).empty());
  EXPECT_FALSE(write_report(dir, ReportFormat::kJson).empty());
  const auto svgs = write_report(dir, ReportFormat::kSvg);
  ASSERT_FALSE(svgs.empty());
  bool hatched = false;
  for (const auto& p : svgs) {
    hatched = hatched || slurp(p).find("class=\"collapsed\"") != std::string::npos;
  }
  EXPECT_TRUE(hatched);
  const auto summary = parse_summary_csv(slurp(dir / "summary.csv"));
  ASSERT_EQ(summary.size(), 1U);
  EXPECT_NEAR(summary[0].mean_abs_error, 0.4, 1e-12);
  EXPECT_THROW(parse_report_format("png"), ValidationError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace modebench
