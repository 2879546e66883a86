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


#include "modebench/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "modebench/errors.hpp"

namespace modebench {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCsvHeader =
    "sampler,a,d,n_reps,mean_abs_error,std,systematic_collapse,mean_wall_clock_s,oracle_w1,oracle_stderr";

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double metric_value(const CellSummary& s, HeatmapMetric metric) {
  return metric == HeatmapMetric::kMeanAbsError ? s.mean_abs_error : s.std;
}

struct Grid {
  std::vector<double> a;
  std::vector<int> d;
  std::map<std::pair<double, int>, const CellSummary*> cells;
};

Grid build_grid(const std::vector<CellSummary>& summary, const std::string& sampler) {
  std::set<double> as;
  std::set<int> ds;
  Grid g;
  for (const CellSummary& s : summary) {
    as.insert(s.a);
    ds.insert(s.d);
    if (s.sampler == sampler) {
      g.cells[{s.a, s.d}] = &s;
    }
  }
  g.a.assign(as.begin(), as.end());
  g.d.assign(ds.begin(), ds.end());
  return g;
}

// viridis at five stops, linearly interpolated
std::string colour(double v) {
  static constexpr std::array<std::array<double, 3>, 5> kStops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  double t = (v - kHeatmapMin) / (kHeatmapMax - kHeatmapMin);
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * (kStops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), kStops.size() - 2);
  const double f = pos - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(kStops[i][c] * (1.0 - f) + kStops[i + 1][c] * f));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string_view metric_name(HeatmapMetric metric) {
  return metric == HeatmapMetric::kMeanAbsError ? "mean_abs_error" : "std";
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_key(double a) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, a);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json record_to_json(const EstimateRecord& r) {
  nlohmann::ordered_json j;
  j["sampler"] = r.sampler;
  j["a"] = r.a;
  j["d"] = r.d;
  j["rep"] = r.rep;
  j["w1_hat"] = r.w1_hat ? nlohmann::ordered_json(*r.w1_hat) : nlohmann::ordered_json(nullptr);
  j["collapsed"] = r.collapsed;
  j["seed_path"] = r.seed_path;
  j["diagnostics"] = r.diagnostics;
  if (!r.error.empty()) {
    j["error"] = r.error;
  }
  j["wall_clock_s"] = r.wall_clock_s;
  return j;
}

EstimateRecord record_from_json(const nlohmann::json& j) {
  try {
    EstimateRecord r;
    r.sampler = j.at("sampler").get<std::string>();
    r.a = j.at("a").get<double>();
    r.d = j.at("d").get<int>();
    r.rep = j.at("rep").get<int>();
    if (!j.at("w1_hat").is_null()) {
      r.w1_hat = j.at("w1_hat").get<double>();
    }
    r.collapsed = j.at("collapsed").get<bool>();
    r.seed_path = j.at("seed_path").get<std::vector<std::uint64_t>>();
    r.diagnostics = nlohmann::ordered_json::parse(j.at("diagnostics").dump());
    if (j.contains("error")) {
      r.error = j.at("error").get<std::string>();
    }
    r.wall_clock_s = j.at("wall_clock_s").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  }
}

fs::path record_path(const fs::path& dir, const std::string& sampler, double a, int d) {
  return dir / "records" / sampler / (format_key(a) + "_" + std::to_string(d) + ".jsonl");
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + file.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + file.string());
  }
  out << text;
  out.close();
  if (!out) {
    throw IoError("write failed for " + file.string());
  }
}

void write_cell_records(const fs::path& dir, const std::vector<EstimateRecord>& records) {
  if (records.empty()) {
    return;
  }
  const EstimateRecord& first = records.front();
  std::string text;
  for (const EstimateRecord& r : records) {
    if (r.sampler != first.sampler || r.a != first.a || r.d != first.d) {
      throw ValidationError("write_cell_records: records from different cells");
    }
    text += record_to_json(r).dump();
    text += '\n';
  }
  write_text(record_path(dir, first.sampler, first.a, first.d), text);
}

std::vector<EstimateRecord> read_records(const fs::path& dir) {
  const fs::path root = dir / "records";
  if (!fs::is_directory(root)) {
    throw ValidationError("no record store at " + root.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<EstimateRecord> out;
  for (const fs::path& f : files) {
    std::istringstream in(read_text(f));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) {
        continue;
      }
      try {
        out.push_back(record_from_json(nlohmann::json::parse(line)));
      } catch (const std::exception& e) {
        throw ValidationError(f.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  return out;
}

void write_oracles(const fs::path& file, const OracleTable& oracles, std::int64_t n_oracle,
                   std::uint64_t master_seed) {
  nlohmann::ordered_json j;
  j["n_samples"] = n_oracle;
  j["master_seed"] = master_seed;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& [key, o] : oracles) {
    cells.push_back({{"a", key.first}, {"d", key.second}, {"w1", o.w1}, {"stderr", o.std_error}});
  }
  j["cells"] = std::move(cells);
  write_text(file, j.dump(2) + "\n");
}

OracleFile read_oracle_file(const fs::path& file) {
  if (!fs::exists(file)) {
    throw ValidationError("missing oracle file " + file.string() + " (run the oracle subcommand first)");
  }
  OracleFile out;
  try {
    const nlohmann::json j = nlohmann::json::parse(read_text(file));
    out.n_samples = j.at("n_samples").get<std::int64_t>();
    out.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& c : j.at("cells")) {
      ModeWeightOracle o;
      o.w1 = c.at("w1").get<double>();
      o.std_error = c.at("stderr").get<double>();
      out.table[{c.at("a").get<double>(), c.at("d").get<int>()}] = o;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed oracle file " + file.string() + ": " + e.what());
  }
  return out;
}

OracleTable read_oracles(const fs::path& file) { return read_oracle_file(file).table; }

std::string summary_csv(const std::vector<CellSummary>& summary) {
  std::vector<const CellSummary*> rows;
  for (const CellSummary& s : summary) {
    rows.push_back(&s);
  }
  std::sort(rows.begin(), rows.end(), [](const CellSummary* x, const CellSummary* y) {
    return std::tie(x->sampler, x->a, x->d) < std::tie(y->sampler, y->a, y->d);
  });
  std::string out = kCsvHeader;
  out += '\n';
  for (const CellSummary* s : rows) {
    out += s->sampler + "," + format_real(s->a) + "," + std::to_string(s->d) + "," + std::to_string(s->n_reps) +
           "," + format_real(s->mean_abs_error) + "," + format_real(s->std) + "," +
           (s->systematic_collapse ? "true" : "false") + "," + format_real(s->mean_wall_clock_s) + "," +
           format_real(s->oracle_w1) + "," + format_real(s->oracle_stderr) + "\n";
  }
  return out;
}

std::vector<CellSummary> parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ValidationError("summary CSV: unexpected header");
  }
  std::vector<CellSummary> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 10 || (f[6] != "true" && f[6] != "false")) {
      throw ValidationError("summary CSV line " + std::to_string(lineno) + ": malformed row");
    }
    CellSummary s;
    try {
      s.sampler = f[0];
      s.a = std::stod(f[1]);
      s.d = std::stoi(f[2]);
      s.n_reps = std::stoi(f[3]);
      s.mean_abs_error = std::stod(f[4]);
      s.std = std::stod(f[5]);
      s.systematic_collapse = f[6] == "true";
      s.mean_wall_clock_s = std::stod(f[7]);
      s.oracle_w1 = std::stod(f[8]);
      s.oracle_stderr = std::stod(f[9]);
    } catch (const std::logic_error&) {
      throw ValidationError("summary CSV line " + std::to_string(lineno) + ": bad number");
    }
    out.push_back(s);
  }
  return out;
}

nlohmann::ordered_json summary_json(const std::vector<CellSummary>& summary) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CellSummary& s : summary) {
    rows.push_back({{"sampler", s.sampler},
                    {"a", s.a},
                    {"d", s.d},
                    {"n_reps", s.n_reps},
                    {"n_failed", s.n_failed},
                    {"mean_abs_error", s.mean_abs_error},
                    {"std", s.std},
                    {"systematic_collapse", s.systematic_collapse},
                    {"mean_wall_clock_s", s.mean_wall_clock_s},
                    {"oracle_w1", s.oracle_w1},
                    {"oracle_stderr", s.oracle_stderr}});
  }
  return rows;
}

std::string heatmap_csv(const std::vector<CellSummary>& summary, const std::string& sampler,
                        HeatmapMetric metric) {
  const Grid g = build_grid(summary, sampler);
  std::string out = "a\\d";
  for (int d : g.d) {
    out += "," + std::to_string(d);
  }
  out += '\n';
  for (double a : g.a) {
    out += format_real(a);
    for (int d : g.d) {
      out += ',';
      const auto it = g.cells.find({a, d});
      if (it != g.cells.end()) {
        out += format_real(metric_value(*it->second, metric));
      }
    }
    out += '\n';
  }
  return out;
}

std::string heatmap_svg(const std::vector<CellSummary>& summary, const std::string& sampler,
                        HeatmapMetric metric) {
  const Grid g = build_grid(summary, sampler);
  constexpr int kCellW = 64;
  constexpr int kCellH = 40;
  constexpr int kLeft = 70;
  constexpr int kTop = 40;
  constexpr int kBarW = 16;
  const int width = kLeft + kCellW * static_cast<int>(g.d.size()) + 90;
  const int height = kTop + kCellH * static_cast<int>(g.a.size()) + 50;
  const int grid_right = kLeft + kCellW * static_cast<int>(g.d.size());
  const int grid_bottom = kTop + kCellH * static_cast<int>(g.a.size());

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<defs>\n"
     << "<pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"8\" height=\"8\">"
     << "<path d=\"M0,8 L8,0 M-2,2 L2,-2 M6,10 L10,6\" stroke=\"#ffffff\" stroke-width=\"1.5\"/></pattern>\n"
     << "<linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">";
  for (int k = 0; k <= 4; ++k) {
    os << "<stop offset=\"" << k * 25 << "%\" stop-color=\"" << colour(kHeatmapMin + (kHeatmapMax - kHeatmapMin) * k / 4.0)
       << "\"/>";
  }
  os << "</linearGradient>\n</defs>\n";
  os << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"13\">" << xml_escape(sampler) << " "
     << metric_name(metric) << "</text>\n";

  for (std::size_t r = 0; r < g.a.size(); ++r) {
    const int y = kTop + kCellH * static_cast<int>(r);
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + kCellH / 2 + 4 << "\" text-anchor=\"end\">a="
       << format_real(g.a[r]) << "</text>\n";
    for (std::size_t c = 0; c < g.d.size(); ++c) {
      const int x = kLeft + kCellW * static_cast<int>(c);
      const auto it = g.cells.find({g.a[r], g.d[c]});
      if (it == g.cells.end()) {
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW << "\" height=\"" << kCellH
           << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
        continue;
      }
      const double v = metric_value(*it->second, metric);
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW << "\" height=\"" << kCellH
         << "\" fill=\"" << colour(v) << "\"/>\n";
      if (it->second->systematic_collapse) {
        os << "<rect class=\"collapsed\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW
           << "\" height=\"" << kCellH << "\" fill=\"url(#hatch)\"/>\n";
      }
      char label[32];
      std::snprintf(label, sizeof label, "%.3f", v);
      const double t = (v - kHeatmapMin) / (kHeatmapMax - kHeatmapMin);
      os << "<text x=\"" << x + kCellW / 2 << "\" y=\"" << y + kCellH / 2 + 4
         << "\" text-anchor=\"middle\" fill=\"" << (t > 0.6 ? "#000000" : "#ffffff") << "\">" << label
         << "</text>\n";
    }
  }
  for (std::size_t c = 0; c < g.d.size(); ++c) {
    os << "<text x=\"" << kLeft + kCellW * static_cast<int>(c) + kCellW / 2 << "\" y=\"" << grid_bottom + 16
       << "\" text-anchor=\"middle\">d=" << g.d[c] << "</text>\n";
  }
  const int bar_x = grid_right + 20;
  os << "<rect x=\"" << bar_x << "\" y=\"" << kTop << "\" width=\"" << kBarW << "\" height=\""
     << grid_bottom - kTop << "\" fill=\"url(#scale)\"/>\n";
  os << "<text x=\"" << bar_x + kBarW + 4 << "\" y=\"" << kTop + 8 << "\">" << format_real(kHeatmapMax)
     << "</text>\n";
  os << "<text x=\"" << bar_x + kBarW + 4 << "\" y=\"" << grid_bottom << "\">" << format_real(kHeatmapMin)
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") {
    return ReportFormat::kCsv;
  }
  if (name == "json") {
    return ReportFormat::kJson;
  }
  if (name == "svg") {
    return ReportFormat::kSvg;
  }
  throw ValidationError("unknown report format '" + std::string(name) + "' (expected csv, json or svg)");
}

std::vector<fs::path> write_report(const fs::path& dir, ReportFormat format, std::vector<std::string>* warnings) {
  const OracleTable oracles = read_oracles(dir / "oracle.json");
  const std::vector<CellSummary> summary = aggregate(read_records(dir), oracles, warnings);
  std::vector<fs::path> written;
  switch (format) {
    case ReportFormat::kCsv:
      written.push_back(dir / "summary.csv");
      write_text(written.back(), summary_csv(summary));
      break;
    case ReportFormat::kJson:
      written.push_back(dir / "summary.json");
      write_text(written.back(), summary_json(summary).dump(2) + "\n");
      break;
    case ReportFormat::kSvg: {
      std::set<std::string> samplers;
      for (const CellSummary& s : summary) {
        samplers.insert(s.sampler);
      }
      for (const std::string& s : samplers) {
        for (HeatmapMetric m : {HeatmapMetric::kMeanAbsError, HeatmapMetric::kStd}) {
          const std::string stem = "heatmap_" + s + "_" + std::string(metric_name(m));
          written.push_back(dir / (stem + ".svg"));
          write_text(written.back(), heatmap_svg(summary, s, m));
          written.push_back(dir / (stem + ".csv"));
          write_text(written.back(), heatmap_csv(summary, s, m));
        }
      }
      break;
    }
  }
  return written;
}

}  // namespace modebench
